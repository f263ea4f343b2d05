#include "evonet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "evonet/theory.hpp"

namespace evonet {

/*============================================================================
 * replica pool
 *==========================================================================*/

void parallel_replicas(std::uint64_t count, unsigned threads,
                       const std::function<void(std::uint64_t)>& body) {
  if (count == 0) return;
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? hw : 1;
  }
  if (static_cast<std::uint64_t>(threads) > count)
    threads = static_cast<unsigned>(count);

  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

/*============================================================================
 * density curve / single-seed survival / extinction samples
 *==========================================================================*/

std::vector<in_point> estimate_in(const model_params& params, const sim_config& cfg,
                                  std::uint64_t replicas, rng_stream& rng) {
  params.validate();
  if (replicas < 2)
    throw std::domain_error("estimate_in: need at least 2 replicas");

  std::vector<double> ts;
  std::vector<double> sum, sumsq;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    sis_engine engine(params, rng);
    const trajectory traj = engine.run(cfg);
    if (r == 0) {
      ts = traj.t;
      sum.assign(ts.size(), 0.0);
      sumsq.assign(ts.size(), 0.0);
    } else if (traj.t.size() != ts.size()) {
      throw std::logic_error("estimate_in: recording grid differs across replicas");
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double d = static_cast<double>(traj.infected[i]) /
                       static_cast<double>(params.n);
      sum[i] += d;
      sumsq[i] += d * d;
    }
  }

  const double big_r = static_cast<double>(replicas);
  std::vector<in_point> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double m = sum[i] / big_r;
    const double var = std::max(0.0, (sumsq[i] - big_r * m * m) / (big_r - 1.0));
    out[i] = in_point{ts[i], m, std::sqrt(var / big_r)};
  }
  return out;
}

proportion survival_single_seed(const model_params& params, std::uint32_t seed_vertex,
                                double t, std::uint64_t replicas, rng_stream& rng) {
  params.validate();
  if (!(t >= 0.0))
    throw std::domain_error("survival_single_seed: t must be >= 0");
  if (replicas == 0)
    throw std::domain_error("survival_single_seed: need at least 1 replica");

  sim_config cfg;
  cfg.t_max = t;
  cfg.stop_on_extinction = true;
  cfg.record_dt = t > 0.0 ? t : 1.0;
  cfg.start = start_mode::single_seed;
  cfg.seed_vertex = seed_vertex;

  std::uint64_t alive = 0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    sis_engine engine(params, rng);
    const trajectory traj = engine.run(cfg);
    if (!traj.extinct) ++alive;
  }
  const double p = static_cast<double>(alive) / static_cast<double>(replicas);
  return proportion{p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicas))};
}

extinction_sample extinction_times(const model_params& params, const sim_config& cfg,
                                   std::uint64_t replicas, rng_stream& rng) {
  params.validate();
  if (!cfg.stop_on_extinction)
    throw std::invalid_argument("extinction_times: cfg must stop on extinction");
  if (replicas == 0)
    throw std::domain_error("extinction_times: need at least 1 replica");

  extinction_sample out;
  out.t_ext.reserve(replicas);
  out.censored.reserve(replicas);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    sis_engine engine(params, rng);
    const trajectory traj = engine.run(cfg);
    if (traj.extinct) {
      out.t_ext.push_back(traj.extinction_time);
      out.censored.push_back(0);
    } else {
      out.t_ext.push_back(cfg.t_max);
      out.censored.push_back(1);
    }
  }
  return out;
}

/*============================================================================
 * plateau detection and log-log fits
 *==========================================================================*/

plateau_result plateau_density(const trajectory& traj, double burn_in, double window) {
  if (!(burn_in >= 0.0) || !(window > 0.0) || burn_in + window > 1.0 + 1e-12)
    throw std::invalid_argument(
        "plateau_density: need burn_in >= 0, window > 0, burn_in + window <= 1");
  if (traj.t.empty() || traj.n == 0)
    throw std::invalid_argument("plateau_density: empty trajectory");

  const double horizon = traj.t.back();
  const double w_lo = horizon * burn_in;
  const double w_hi = horizon * (burn_in + window);

  if (traj.extinct && traj.extinction_time <= w_lo)
    return plateau_result{0.0, 0.0, false};

  std::vector<double> dens;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    if (traj.t[i] >= w_lo - 1e-12 * horizon && traj.t[i] <= w_hi + 1e-12 * horizon)
      dens.push_back(static_cast<double>(traj.infected[i]) /
                     static_cast<double>(traj.n));
  }
  if (dens.size() < 2)
    throw std::invalid_argument("plateau_density: window covers fewer than 2 grid points");

  const stats::summary s = stats::mean_stderr(dens);

  // drift between the two halves of the window, relative to the window mean
  const std::size_t half = dens.size() / 2;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) m1 += dens[i];
  for (std::size_t i = half; i < dens.size(); ++i) m2 += dens[i];
  m1 /= static_cast<double>(half);
  m2 /= static_cast<double>(dens.size() - half);

  bool stable = s.mean > 0.0;
  if (stable) stable = std::abs(m1 - m2) / s.mean < 0.10;
  return plateau_result{s.mean, s.stderr_, stable};
}

stats::fit_result fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& se) {
  if (x.size() != y.size() || x.size() != se.size())
    throw std::invalid_argument("fit_loglog: length mismatch");
  if (x.size() < 3)
    throw std::invalid_argument("fit_loglog: need at least 3 points");

  std::vector<double> lx(x.size()), ly(x.size()), w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::domain_error("fit_loglog: x and y must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    // delta method: sd(log y) = se / y; exact points get a tiny floor so the
    // weight matrix stays finite
    const double s_eff = std::max(se[i], 1e-12 * y[i]);
    const double rel = s_eff / y[i];
    w[i] = 1.0 / (rel * rel);
  }
  return stats::weighted_least_squares(lx, ly, w, /*residual_scaled=*/true);
}

/*============================================================================
 * lambda sweep
 *==========================================================================*/

void sweep_config::validate() const {
  params.kernel.validate();
  if (n < 2) throw std::domain_error("sweep: n must be >= 2");
  if (replicas == 0) throw std::domain_error("sweep: replicas must be >= 1");
  if (lambda_list.empty())
    throw std::domain_error("sweep: lambda_list must not be empty");
  for (double l : lambda_list)
    if (!(l > 0.0)) throw std::domain_error("sweep: lambdas must be > 0");
  for (std::size_t i = 1; i < lambda_list.size(); ++i)
    if (!(lambda_list[i] < lambda_list[i - 1]))
      throw std::domain_error("sweep: lambda_list must be strictly decreasing");
  if (!(burn_in >= 0.0) || !(window > 0.0) || burn_in + window > 1.0 + 1e-12)
    throw std::domain_error("sweep: need burn_in >= 0, window > 0, burn_in + window <= 1");
  if (!(t_max > 0.0)) throw std::domain_error("sweep: t_max must be > 0");
  if (!(record_dt > 0.0)) throw std::domain_error("sweep: record_dt must be > 0");
}

sweep_result sweep_lambda(const sweep_config& cfg) {
  cfg.validate();
  const std::size_t n_lambda = cfg.lambda_list.size();
  const std::uint64_t reps = cfg.replicas;

  /* replica (lambda index k, replica r) draws from stream k * reps + r and
   * writes slot k * reps + r: bit-identical results at any thread count */
  std::vector<plateau_result> slots(n_lambda * reps);
  parallel_replicas(n_lambda * reps, cfg.threads, [&](std::uint64_t idx) {
    const std::size_t k = static_cast<std::size_t>(idx / reps);
    model_params mp = cfg.params;
    mp.n = cfg.n;
    mp.lambda = cfg.lambda_list[k];
    mp.validate();

    rng_stream rng(cfg.master_seed, idx);
    sis_engine engine(mp, rng);
    sim_config sc;
    sc.t_max = cfg.t_max;
    sc.stop_on_extinction = true;
    sc.record_dt = cfg.record_dt;
    sc.start = start_mode::all_infected;
    const trajectory traj = engine.run(sc);
    slots[idx] = plateau_density(traj, cfg.burn_in, cfg.window);
  });

  sweep_result out;
  out.rows.reserve(n_lambda);
  std::vector<double> fx, fy, fs;
  for (std::size_t k = 0; k < n_lambda; ++k) {
    std::vector<double> rhos;
    rhos.reserve(reps);
    bool all_stable = true;
    for (std::uint64_t r = 0; r < reps; ++r) {
      const plateau_result& p = slots[k * reps + r];
      rhos.push_back(p.rho_hat);
      all_stable = all_stable && p.stable;
    }
    const stats::summary s = stats::mean_stderr(rhos);
    sweep_row row;
    row.lambda = cfg.lambda_list[k];
    row.rho_hat = s.mean;
    row.se = s.stderr_;
    row.stable = all_stable && s.mean > 0.0;
    out.rows.push_back(row);
    if (row.stable) {
      fx.push_back(row.lambda);
      fy.push_back(row.rho_hat);
      fs.push_back(row.se);
    }
  }

  if (fx.size() >= 3) {
    out.fit = fit_loglog(fx, fy, fs);
    out.sufficient = true;
  }
  return out;
}

/*============================================================================
 * extinction-time scaling
 *==========================================================================*/

namespace {

/* linear-interpolation quantile of a sorted sample */
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

} // namespace

extinction_scaling_result extinction_scaling(const model_params& tmpl,
                                             const std::vector<std::uint64_t>& n_list,
                                             std::uint64_t replicas, double t_cap,
                                             std::uint64_t master_seed,
                                             unsigned threads) {
  tmpl.kernel.validate();
  const double tau = tau_from_gamma(tmpl.kernel.gamma);
  const regime reg = classify_regime(tmpl.kernel.kind, tau, tmpl.eta);
  if (reg.kind != regime_kind::fast && reg.kind != regime_kind::ultra_fast) {
    std::ostringstream msg;
    msg << "extinction_scaling: (tau = " << tau << ", eta = " << tmpl.eta
        << ") is not in a fast-extinction regime (" << reg.description << ")";
    throw std::domain_error(msg.str());
  }
  if (n_list.size() < 4)
    throw std::domain_error("extinction_scaling: need at least 4 network sizes");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::domain_error("extinction_scaling: n_list must be strictly increasing");
  if (static_cast<double>(n_list.back()) <
      8.0 * static_cast<double>(n_list.front()))
    throw std::domain_error("extinction_scaling: n_list must span at least a factor 8");
  if (replicas < 2)
    throw std::domain_error("extinction_scaling: need at least 2 replicas");
  if (!(t_cap > 0.0))
    throw std::domain_error("extinction_scaling: t_cap must be > 0");

  const std::size_t n_sizes = n_list.size();
  std::vector<double> times(n_sizes * replicas, 0.0);
  std::vector<std::uint8_t> cens(n_sizes * replicas, 0);

  parallel_replicas(n_sizes * replicas, threads, [&](std::uint64_t idx) {
    const std::size_t k = static_cast<std::size_t>(idx / replicas);
    model_params mp = tmpl;
    mp.n = n_list[k];
    mp.validate();

    rng_stream rng(master_seed, idx);
    sis_engine engine(mp, rng);
    sim_config sc;
    sc.t_max = t_cap;
    sc.stop_on_extinction = true;
    sc.record_dt = t_cap;
    sc.start = start_mode::all_infected;
    const trajectory traj = engine.run(sc);
    times[idx] = traj.extinct ? traj.extinction_time : t_cap;
    cens[idx] = traj.extinct ? 0 : 1;
  });

  extinction_scaling_result out;
  out.points.reserve(n_sizes);
  out.samples.reserve(n_sizes);
  std::vector<double> fx, fy, fs;
  for (std::size_t k = 0; k < n_sizes; ++k) {
    extinction_sample sample;
    sample.t_ext.assign(times.begin() + static_cast<std::ptrdiff_t>(k * replicas),
                        times.begin() + static_cast<std::ptrdiff_t>((k + 1) * replicas));
    sample.censored.assign(cens.begin() + static_cast<std::ptrdiff_t>(k * replicas),
                           cens.begin() + static_cast<std::ptrdiff_t>((k + 1) * replicas));

    std::vector<double> sorted = sample.t_ext;
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t n_cens = 0;
    for (std::uint8_t c : sample.censored) n_cens += c;

    extinction_point pt;
    pt.n = n_list[k];
    pt.median_t = sorted_quantile(sorted, 0.5);
    // asymptotic stderr of a sample median: sqrt(pi/2) * sigma / sqrt(R),
    // with sigma read off the interquartile range of a normal
    const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    pt.se = 1.2533141373155003 * (iqr / 1.3489795003921634) /
            std::sqrt(static_cast<double>(replicas));
    pt.censored_frac =
        static_cast<double>(n_cens) / static_cast<double>(replicas);
    pt.usable = pt.censored_frac <= 0.5;
    out.points.push_back(pt);
    out.samples.push_back(std::move(sample));

    if (pt.usable && pt.se > 0.0 && pt.median_t > 0.0) {
      fx.push_back(static_cast<double>(pt.n));
      fy.push_back(pt.median_t);
      fs.push_back(pt.se);
    }
  }

  if (fx.size() >= 3) {
    out.fit = fit_loglog(fx, fy, fs);
    out.sufficient = true;
  }
  return out;
}

/*============================================================================
 * isolated-star survival
 *==========================================================================*/

namespace {

struct star_draw {
  double t = 0.0;
  bool censored = false;
};

/* Exact CTMC on the counts (hub infected?, N_infected, N_connected_healthy,
 * N_unconnected); the pool has pool_factor * k members, each connected with
 * probability 1/pool_factor.  A leaf update resamples the leaf's connection
 * and clears its infection (a refreshed vertex is a fresh stationary
 * neighbour); a hub update drops every current edge and redraws the
 * connected set.  Only state-changing transitions carry rates, so an update
 * of an unconnected healthy vertex that stays unconnected never costs an
 * event. */
star_draw run_star(double hub_update_rate, double kappa0, double lambda,
                   std::uint64_t pool, double p_conn, double t_cap,
                   rng_stream& rng) {
  bool hub = true;
  std::uint64_t n_inf = 0;
  std::uint64_t n_con = rng.binomial(pool, p_conn);
  std::uint64_t n_unc = pool - n_con;
  double t = 0.0;

  while (true) {
    if (!hub && n_inf == 0) return star_draw{t, false};

    const double r_connect = kappa0 * static_cast<double>(n_unc) * p_conn;
    const double r_disconnect =
        kappa0 * static_cast<double>(n_con) * (1.0 - p_conn);
    const double r_refresh = kappa0 * static_cast<double>(n_inf);
    const double r_leaf_rec = static_cast<double>(n_inf);
    const double r_hub_rec = hub ? 1.0 : 0.0;
    const double r_hub_to_leaf = hub ? lambda * static_cast<double>(n_con) : 0.0;
    const double r_leaf_to_hub = hub ? 0.0 : lambda * static_cast<double>(n_inf);
    const double r_hub_update = hub_update_rate;
    const double total = r_connect + r_disconnect + r_refresh + r_leaf_rec +
                         r_hub_rec + r_hub_to_leaf + r_leaf_to_hub + r_hub_update;
    if (!(total > 0.0)) return star_draw{t_cap, true};

    const double dt = rng.exponential(total);
    if (t + dt >= t_cap) return star_draw{t_cap, true};
    t += dt;

    double u = rng.uniform() * total;
    if ((u -= r_connect) < 0.0) {
      --n_unc;
      ++n_con;
    } else if ((u -= r_disconnect) < 0.0) {
      --n_con;
      ++n_unc;
    } else if ((u -= r_refresh) < 0.0) {
      --n_inf;
      if (rng.uniform() < p_conn) ++n_con; else ++n_unc;
    } else if ((u -= r_leaf_rec) < 0.0) {
      --n_inf;
      ++n_con;
    } else if ((u -= r_hub_rec) < 0.0) {
      hub = false;
    } else if ((u -= r_hub_to_leaf) < 0.0) {
      --n_con;
      ++n_inf;
    } else if ((u -= r_leaf_to_hub) < 0.0) {
      hub = true;
    } else {
      // hub update: every edge is dropped and redrawn, so currently infected
      // pool members fall out of the star and a fresh connected set appears
      n_inf = 0;
      n_con = rng.binomial(pool, p_conn);
      n_unc = pool - n_con;
    }
  }
}

} // namespace

star_result star_survival(const std::vector<std::uint64_t>& k_list, double eta,
                          double lambda, double kappa0, std::uint64_t pool_factor,
                          std::uint64_t replicas, double t_cap,
                          std::uint64_t master_seed, unsigned threads) {
  if (k_list.empty())
    throw std::domain_error("star_survival: k_list must not be empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] == 0)
      throw std::domain_error("star_survival: degrees must be >= 1");
    if (i > 0 && k_list[i] <= k_list[i - 1])
      throw std::domain_error("star_survival: k_list must be strictly increasing");
  }
  if (!(eta <= 0.5))
    throw std::domain_error("star_survival: eta must be <= 1/2");
  if (!(lambda >= 0.0))
    throw std::domain_error("star_survival: lambda must be >= 0");
  if (!(kappa0 >= 0.0))
    throw std::domain_error("star_survival: kappa0 must be >= 0");
  if (pool_factor < 1)
    throw std::domain_error("star_survival: pool_factor must be >= 1");
  if (replicas < 2)
    throw std::domain_error("star_survival: need at least 2 replicas");
  if (!(t_cap > 0.0))
    throw std::domain_error("star_survival: t_cap must be > 0");

  star_result out;
  const double local_scale = lambda * lambda * static_cast<double>(k_list.front());
  if (local_scale < 10.0) {
    std::ostringstream msg;
    msg << "lambda^2 * min(k) = " << local_scale
        << " is below the local-survival scale (~10); slopes will be unreliable";
    out.warning = msg.str();
  }

  const std::size_t n_k = k_list.size();
  const double p_conn = 1.0 / static_cast<double>(pool_factor);
  std::vector<double> times(n_k * replicas, 0.0);
  std::vector<std::uint8_t> cens(n_k * replicas, 0);

  parallel_replicas(n_k * replicas, threads, [&](std::uint64_t idx) {
    const std::size_t ki = static_cast<std::size_t>(idx / replicas);
    const std::uint64_t k = k_list[ki];
    const double hub_rate = kappa0 * std::pow(static_cast<double>(k), eta);
    rng_stream rng(master_seed, idx);
    const star_draw d = run_star(hub_rate, kappa0, lambda, pool_factor * k,
                                 p_conn, t_cap, rng);
    times[idx] = d.t;
    cens[idx] = d.censored ? 1 : 0;
  });

  std::vector<double> fx, fy, fs;
  out.points.reserve(n_k);
  for (std::size_t ki = 0; ki < n_k; ++ki) {
    std::vector<double> sample(times.begin() + static_cast<std::ptrdiff_t>(ki * replicas),
                               times.begin() + static_cast<std::ptrdiff_t>((ki + 1) * replicas));
    std::uint64_t n_cens = 0;
    for (std::uint64_t r = 0; r < replicas; ++r) n_cens += cens[ki * replicas + r];

    const stats::summary s = stats::mean_stderr(sample);
    star_point pt;
    pt.k = k_list[ki];
    pt.mean_time = s.mean;
    pt.se = s.stderr_;
    pt.censored_frac = static_cast<double>(n_cens) / static_cast<double>(replicas);
    out.points.push_back(pt);

    // a fully censored point has zero spread and no information about the
    // mean; keep it out of the fit rather than give it infinite weight
    if (pt.se > 0.0 && pt.mean_time > 0.0) {
      fx.push_back(static_cast<double>(pt.k));
      fy.push_back(pt.mean_time);
      fs.push_back(pt.se);
    }
  }

  if (fx.size() >= 3) {
    out.fit = fit_loglog(fx, fy, fs);
    out.sufficient = true;
  }
  return out;
}

/*============================================================================
 * duality check
 *==========================================================================*/

duality_result duality_check(const model_params& params, double t,
                             std::uint64_t replicas, std::uint64_t master_seed) {
  params.validate();
  if (params.n > 32)
    throw std::domain_error("duality_check: n must be <= 32");
  if (!(t >= 0.0))
    throw std::domain_error("duality_check: t must be >= 0");
  if (replicas < 2)
    throw std::domain_error("duality_check: need at least 2 replicas");

  duality_result out;

  // side A: infected fraction at time t from the all-infected start
  {
    rng_stream rng(master_seed, 0);
    sim_config cfg;
    cfg.t_max = t;
    cfg.stop_on_extinction = true;
    cfg.record_dt = t > 0.0 ? t : 1.0;
    cfg.start = start_mode::all_infected;
    const std::vector<in_point> curve = estimate_in(params, cfg, replicas, rng);
    out.i_n = curve.back().mean;
    out.i_n_se = curve.back().se;
  }

  // side B: survival probability of a single seed, averaged over the seed
  // location by cycling it round-robin through the vertices
  {
    rng_stream rng(master_seed, 1);
    sim_config cfg;
    cfg.t_max = t;
    cfg.stop_on_extinction = true;
    cfg.record_dt = t > 0.0 ? t : 1.0;
    cfg.start = start_mode::single_seed;

    std::uint64_t alive = 0;
    for (std::uint64_t r = 0; r < replicas; ++r) {
      cfg.seed_vertex = static_cast<std::uint32_t>(r % params.n) + 1;
      sis_engine engine(params, rng);
      const trajectory traj = engine.run(cfg);
      if (!traj.extinct) ++alive;
    }
    const double p = static_cast<double>(alive) / static_cast<double>(replicas);
    out.dual = p;
    // plain binomial stderr; slightly conservative under seed stratification
    out.dual_se = std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
  }

  const double diff = out.i_n - out.dual;
  if (diff == 0.0) {
    out.z = 0.0;
  } else {
    const double se = std::sqrt(out.i_n_se * out.i_n_se + out.dual_se * out.dual_se);
    out.z = std::abs(diff) / se;
  }
  return out;
}

} // namespace evonet
