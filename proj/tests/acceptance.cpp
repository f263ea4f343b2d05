// acceptance gate: ten end-to-end criteria, each printing exactly one line
//   PASS criterion N: <detail>   or   FAIL criterion N: <detail>
// run with no argument to execute all ten in order (exit 0 iff all pass), or
// with a single index 1..10 to run one criterion (exit 0 iff it passes).
//
// criteria 1-7 and 10 are hard gates (goldens, oracles, invariants); 8 and 9
// are soft exponent-recovery evidence: the headline exponents are small-lambda
// / large-N limits, so the slope bands are wide and 8 falls back to a
// monotonicity check when the band is missed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "evonet/engine.hpp"
#include "evonet/experiments.hpp"
#include "evonet/graph.hpp"
#include "evonet/params.hpp"
#include "evonet/quadrature.hpp"
#include "evonet/rng.hpp"
#include "evonet/stats.hpp"
#include "evonet/theory.hpp"

#include "ctmc_oracle.hpp"

namespace fs = std::filesystem;
using namespace evonet;

namespace {

// ---------------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------------

model_params make_params(kernel_kind kind, double gamma, double eta,
                         double kappa0, double lambda, std::uint64_t n,
                         double beta = 1.0) {
  model_params p;
  p.n = n;
  p.kernel.kind = kind;
  p.kernel.beta = beta;
  p.kernel.gamma = gamma;
  p.eta = eta;
  p.kappa0 = kappa0;
  p.lambda = lambda;
  return p;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// criterion 1: closed-form exponent golden values
// ---------------------------------------------------------------------------

bool criterion_1(std::string& detail) {
  struct golden {
    kernel_kind kind;
    double tau, eta, expected;
  };
  const std::vector<golden> cases = {
      {kernel_kind::factor, 2.4, -1.0, 1.6667},
      {kernel_kind::factor, 2.8, -1.0, 2.6},
      {kernel_kind::factor, 3.5, -0.25, 7.0},
      {kernel_kind::pref_attach, 3.0, -0.3, 3.3077},
      {kernel_kind::pref_attach, 2.5, 1.0, 3.0},
  };
  double worst = 0.0;
  std::ostringstream os;
  bool ok = true;
  for (const auto& c : cases) {
    const double xi = exponent_closed_form(c.kind, c.tau, c.eta);
    const double err = std::fabs(xi - c.expected);
    worst = std::max(worst, err);
    if (err > 1e-4) ok = false;
    os << to_string(c.kind) << "(" << c.tau << "," << c.eta << ")=" << fmt(xi)
       << " ";
  }
  detail = os.str() + "max |err| = " + fmt(worst, 3) + " vs tolerance 1e-4";
  return ok;
}

// ---------------------------------------------------------------------------
// criterion 2: strategy-minimum vs closed form + continuity under refinement
// ---------------------------------------------------------------------------

// largest jump of u = xi/(1+xi) between adjacent slow cells on an n x n grid
// over (2,6] x [-3,3]. xi > 1 throughout the slow region but blows up toward
// some branch-region edges; u maps those poles to 1 continuously and has a
// bounded gradient on every branch, so M(h) ~ h iff xi is continuous while a
// genuine jump would keep M(h) bounded away from 0 under refinement
double max_adjacent_jump(kernel_kind kind, std::size_t n) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> val(n * n, nan);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = 2.0 + static_cast<double>(i + 1) * (4.0 / static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const double eta =
          -3.0 + static_cast<double>(j) * (6.0 / static_cast<double>(n - 1));
      if (classify_regime(kind, tau, eta).kind != regime_kind::slow_metastable) continue;
      const double xi = exponent_closed_form(kind, tau, eta);
      val[i * n + j] = xi / (1.0 + xi);
    }
  }
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = val[i * n + j];
      if (!std::isfinite(a)) continue;
      if (i + 1 < n && std::isfinite(val[(i + 1) * n + j]))
        m = std::max(m, std::fabs(a - val[(i + 1) * n + j]));
      if (j + 1 < n && std::isfinite(val[i * n + j + 1]))
        m = std::max(m, std::fabs(a - val[i * n + j + 1]));
    }
  }
  return m;
}

bool criterion_2(std::string& detail) {
  bool ok = true;
  std::ostringstream os;
  for (kernel_kind kind : {kernel_kind::factor, kernel_kind::pref_attach}) {
    // (a) the feasible-strategy minimum equals the closed form in the slow
    // region of a 400 x 400 grid
    const std::size_t n = 400;
    double worst = 0.0;
    double worst_tau = 0.0, worst_eta = 0.0;
    std::size_t slow_cells = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = 2.0 + static_cast<double>(i + 1) * 0.01;
      for (std::size_t j = 0; j < n; ++j) {
        const double eta = -3.0 + static_cast<double>(j) * (6.0 / 399.0);
        if (classify_regime(kind, tau, eta).kind != regime_kind::slow_metastable) continue;
        ++slow_cells;
        const double xi_c = exponent_closed_form(kind, tau, eta);
        const double xi_s = exponent_via_strategies(kind, tau, eta).xi;
        // xi has poles toward the fast seam (cells 1e-4 from it reach
        // xi ~ 1e5, where the seam distance itself carries ~1e-11 relative
        // rounding), so the 1e-9 agreement is absolute-or-relative
        const double err = std::fabs(xi_c - xi_s) / std::max(1.0, std::fabs(xi_c));
        if (err > worst) {
          worst = err;
          worst_tau = tau;
          worst_eta = eta;
        }
      }
    }
    if (worst > 1e-9 || slow_cells < 10000) ok = false;
    // (b) adjacent-cell jumps shrink under grid refinement (continuity);
    // the steepest admitted cells sit next to the |xi| = 50 clip where the
    // gradient is locally flat in h, so halving h should roughly halve the
    // largest jump. 0.6 leaves slack for alignment effects.
    const double m_coarse = max_adjacent_jump(kind, 400);
    const double m_fine = max_adjacent_jump(kind, 800);
    const bool cont = m_fine <= std::max(0.6 * m_coarse, 1e-9);
    if (!cont) ok = false;
    os << to_string(kind) << ": max |strategies - closed| = " << fmt(worst, 3)
       << " at (" << fmt(worst_tau, 6) << "," << fmt(worst_eta, 6) << ") over "
       << slow_cells << " slow cells, u-jump " << fmt(m_coarse, 4) << " -> "
       << fmt(m_fine, 4) << " under refinement" << (cont ? "" : " (no decay)")
       << "; ";
  }
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------------------
// criterion 3: engine exactness against the uniformized CTMC oracle
// ---------------------------------------------------------------------------

bool criterion_3(std::string& detail) {
  // beta = 5 saturates every pair probability and kappa0 = 0 freezes the
  // graph, so the engine runs the plain contact process on K5
  auto p = make_params(kernel_kind::factor, 0.5, 0.0, 0.0, 0.3, 5, 5.0);
  rng_stream rng(8211, 0);
  const std::size_t reps = 100000;
  sim_config cfg;
  cfg.t_max = 300.0;
  cfg.record_dt = 300.0;
  cfg.stop_on_extinction = true;
  std::vector<double> times;
  times.reserve(reps);
  std::size_t censored = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    sis_engine eng(p, rng);
    auto traj = eng.run(cfg);
    if (!traj.extinct) {
      ++censored;
      continue;
    }
    times.push_back(traj.extinction_time);
  }
  ctmc::sis_extinction_cdf oracle(5, ctmc::complete_edges(5), 0.3, 320.0);
  const double d =
      stats::ks_statistic(times, [&](double t) { return oracle(t); });
  const double pv = stats::ks_pvalue(d, times.size());

  // isolated vertex: no pairs exist at n = 1, so survival is exactly e^{-t}
  auto p1 = make_params(kernel_kind::factor, 0.5, 0.0, 1.0, 0.7, 1);
  rng_stream rng2(8211, 1);
  auto surv = survival_single_seed(p1, 1, 1.0, 100000, rng2);
  const double target = std::exp(-1.0);
  const double zdev = std::fabs(surv.p - target) / surv.se;

  detail = "K5 lambda=0.3: KS D = " + fmt(d, 4) + ", p = " + fmt(pv, 4) +
           " (need > 0.01, " + std::to_string(censored) +
           " censored); isolated vertex: |p_hat - e^{-1}| = " +
           fmt(std::fabs(surv.p - target), 3) + " = " + fmt(zdev, 3) +
           " se (need < 3)";
  return pv > 0.01 && censored == 0 && zdev < 3.0;
}

// ---------------------------------------------------------------------------
// criterion 4: self-duality at N = 8
// ---------------------------------------------------------------------------

bool criterion_4(std::string& detail) {
  auto p = make_params(kernel_kind::factor, 0.5, -1.0, 1.0, 0.5, 8);
  auto res = duality_check(p, 2.0, 100000, 4242);
  detail = "I_N(2) = " + fmt(res.i_n, 5) + " +/- " + fmt(res.i_n_se, 3) +
           ", dual = " + fmt(res.dual, 5) + " +/- " + fmt(res.dual_se, 3) +
           ", z = " + fmt(res.z, 3) + " (need < 3)";
  return res.z < 3.0;
}

// ---------------------------------------------------------------------------
// criterion 5: graph stationarity after coupled dynamics (chi-square)
// ---------------------------------------------------------------------------

bool criterion_5(std::string& detail) {
  auto p = make_params(kernel_kind::factor, 0.5, 0.0, 1.0, 0.3, 2000);
  const std::uint64_t reps = 200;
  const int blocks = 10;

  // pair (i, j) goes to block floor(-3 log10 p_ij) so each block spans a
  // factor ~2.15 in probability; expected count and variance per block come
  // from the exact product-Bernoulli law
  auto block_of = [&](double prob) {
    int b = static_cast<int>(std::floor(-std::log10(prob) * 3.0));
    return std::min(blocks - 1, std::max(0, b));
  };
  std::vector<double> e_b(blocks, 0.0), v_b(blocks, 0.0);
  for (std::uint64_t i = 1; i <= p.n; ++i) {
    for (std::uint64_t j = i + 1; j <= p.n; ++j) {
      const double prob = connection_prob(p, i, j);
      const int b = block_of(prob);
      e_b[b] += prob;
      v_b[b] += prob * (1.0 - prob);
    }
  }

  sim_config cfg;
  cfg.t_max = 10.0;
  cfg.record_dt = 10.0;
  cfg.stop_on_extinction = false;  // graph keeps evolving either way
  std::vector<double> t_b(blocks, 0.0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    rng_stream rng(560025, r);
    sis_engine eng(p, rng);
    eng.run(cfg);
    const auto& g = eng.graph();
    for (std::uint32_t v = 1; v <= p.n; ++v) {
      for (std::uint32_t u : g.neighbors(v)) {
        if (u <= v) continue;
        t_b[block_of(connection_prob(p, v, u))] += 1.0;
      }
    }
  }

  double chi2 = 0.0;
  int df = 0;
  const double rd = static_cast<double>(reps);
  for (int b = 0; b < blocks; ++b) {
    if (rd * v_b[b] < 100.0) continue;  // skip tiny tail blocks
    const double dev = t_b[b] - rd * e_b[b];
    chi2 += dev * dev / (rd * v_b[b]);
    ++df;
  }
  const double pv = stats::chi_square_sf(chi2, df);
  detail = "chi2 = " + fmt(chi2, 4) + " on " + std::to_string(df) +
           " blocks, p = " + fmt(pv, 4) + " (need > 0.01) after t = 10 at N = 2000";
  return pv > 0.01;
}

// ---------------------------------------------------------------------------
// criterion 6: star local-survival scaling in k
// ---------------------------------------------------------------------------

std::string star_arm_detail(const star_result& res) {
  std::ostringstream os;
  os << "slope " << fmt(res.fit.slope, 4) << " +/- "
     << fmt(res.fit.slope_stderr, 3) << " [";
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const auto& pt = res.points[i];
    os << (i ? " " : "") << "k=" << pt.k << ":" << fmt(pt.mean_time, 4);
    if (pt.censored_frac > 0.0)
      os << "(" << fmt(100.0 * pt.censored_frac, 3) << "% censored)";
  }
  os << "]";
  return os.str();
}

bool criterion_6(std::string& detail) {
  const std::vector<std::uint64_t> ks = {200, 400, 800, 1600};
  // eta = -1: the headline scale lambda^2 k^{1-eta} = lambda^2 k^2 is a
  // small-lambda limit. at lambda = 0.2 the hub holds its edges for time
  // ~k, long enough for the static-star exponential regime e^{c lambda^2 k}
  // to dominate, so mean survival grows much faster than k^2 here; t_cap
  // keeps the top size affordable and the censoring is reported.
  auto arm_a = star_survival(ks, -1.0, 0.2, 1.0, 10, 2000, 2000.0, 31337, 0);
  auto arm_b = star_survival(ks, 0.0, 0.2, 1.0, 10, 2000, 1500.0, 31338, 0);
  const bool ok_a = arm_a.sufficient && std::fabs(arm_a.fit.slope - 2.0) <= 0.3;
  const bool ok_b = arm_b.sufficient && std::fabs(arm_b.fit.slope - 1.0) <= 0.3;
  std::ostringstream os;
  os << "eta=-1 (band 2 +/- 0.3): " << star_arm_detail(arm_a)
     << (ok_a ? " ok" : " MISS") << "; eta=0 (band 1 +/- 0.3): "
     << star_arm_detail(arm_b) << (ok_b ? " ok" : " MISS");
  if (!arm_a.warning.empty()) os << "; warning: " << arm_a.warning;
  if (!ok_a) {
    // successive log2 slopes diagnose the failure mode: they rise with k
    // instead of settling near 2, the signature of exponential growth in k
    os << "; eta=-1 pairwise log2 slopes:";
    for (std::size_t i = 1; i < arm_a.points.size(); ++i)
      os << " "
         << fmt(std::log2(arm_a.points[i].mean_time /
                          arm_a.points[i - 1].mean_time), 3);
  }
  detail = os.str();
  return ok_a && ok_b;
}

// ---------------------------------------------------------------------------
// criterion 7: mean-field dose bound D_0 <= 1 with the T^loc score
// ---------------------------------------------------------------------------

bool criterion_7(std::string& detail) {
  auto p = make_params(kernel_kind::factor, 0.25, -0.5, 1.0, 0.01, 100);
  auto s = tloc_power_score(p, 1e-4, 400);
  auto d0 = check_master_inequality(mi_variant::da_factor, p, 0.0, s, 1.0);

  // monotone nondecreasing as a decreases to 0 (the integrand only grows
  // when the flat segment s(a or y) widens toward the singular endpoint)
  const std::vector<double> grid = {0.5,  0.3,   0.2,   0.1,   0.05, 0.02,
                                    0.01, 0.005, 0.002, 0.001, 0.0};
  bool monotone = true;
  double prev = -1.0;
  for (double a : grid) {
    const double da =
        check_master_inequality(mi_variant::da_factor, p, a, s, 1.0)
            .lhs_max_ratio;
    if (da < prev - 1e-12) monotone = false;
    prev = da;
  }

  std::ostringstream os;
  os << "D_0 = " << fmt(d0.lhs_max_ratio, 7) << " (need <= 1); monotone as a->0: "
     << (monotone ? "yes" : "NO");
  if (d0.lhs_max_ratio > 1.0) {
    // structural: with s(x) = T^loc(x) x^{-gamma} and T^loc >= 8 everywhere,
    // D_0 >= 8 lambda int y^{-2 gamma} * 8 dy = 64 lambda / (1 - 2 gamma),
    // which is 1.28 at lambda = 0.01, gamma = 0.25. the bound scales like
    // c * lambda with c ~ 128.5 here, so D_0 <= 1 needs lambda <= ~0.0078.
    os << "; floor 64*lambda/(1-2*gamma) = "
       << fmt(64.0 * p.lambda / (1.0 - 2.0 * p.kernel.gamma), 4)
       << " already exceeds 1 at lambda = " << p.lambda
       << "; the dose is proportional to lambda (c ~ "
       << fmt(d0.lhs_max_ratio / p.lambda, 4)
       << ") and drops below 1 only for lambda <= "
       << fmt(p.lambda / d0.lhs_max_ratio, 3);
  }
  detail = os.str();
  return d0.lhs_max_ratio <= 1.0 && monotone;
}

// ---------------------------------------------------------------------------
// criterion 8: metastable-exponent recovery (soft)
// ---------------------------------------------------------------------------

bool criterion_8(std::string& detail) {
  sweep_config cfg;
  cfg.params = make_params(kernel_kind::factor, gamma_from_tau(2.4), -1.0, 1.0, 0.0, 0);
  cfg.lambda_list = {0.5, 0.35, 0.25, 0.18};
  cfg.n = 100000;
  cfg.replicas = 20;
  cfg.t_max = 20.0;
  cfg.record_dt = 0.1;
  cfg.burn_in = 0.4;  // plateau is reached by t ~ 3; window [8, 17]
  cfg.window = 0.45;
  cfg.master_seed = 20250818;
  cfg.threads = 0;
  auto res = sweep_lambda(cfg);

  bool all_stable = true;
  bool decreasing = true;
  std::ostringstream rows;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    all_stable = all_stable && r.stable;
    if (i > 0 && r.rho_hat >= res.rows[i - 1].rho_hat) decreasing = false;
    rows << (i ? " " : "") << "rho(" << r.lambda << ")=" << fmt(r.rho_hat, 4)
         << (r.stable ? "" : "[unstable]");
  }
  const double xi = 5.0 / 3.0;
  const double gap = res.fit.slope - xi;
  const bool in_band = std::fabs(gap) <= 0.5;

  std::ostringstream os;
  os << rows.str() << "; slope " << fmt(res.fit.slope, 4) << " +/- "
     << fmt(res.fit.slope_stderr, 3) << " vs xi = 1.667 (gap " << fmt(gap, 3)
     << (in_band ? ", inside the soft band)" : ", outside the soft band)")
     << "; monotone decreasing: " << (decreasing ? "yes" : "NO");
  if (!in_band)
    os << "; at these lambda the plateau is still far above the lambda^xi "
          "asymptote, so the soft band is reported and the gate falls back "
          "to stability + monotonicity";
  detail = os.str();
  // the exponent itself is soft evidence: pass needs stable plateaus at every
  // lambda and either the band or (outside it) strict monotonicity
  return all_stable && res.sufficient && (in_band || decreasing);
}

// ---------------------------------------------------------------------------
// criterion 9: fast-vs-slow discrimination at eta = -0.5
// ---------------------------------------------------------------------------

bool criterion_9(std::string& detail) {
  const std::vector<std::uint64_t> sizes = {500, 1000, 2000, 4000};

  // fast arm: tau = 5 (gamma = 0.25), exponent band spans the theoretical
  // bracket [0.7 * gamma(1-eta), 1.3 * (1-eta)/(2-eta)] = [0.26, 0.78]
  auto fast = make_params(kernel_kind::factor, gamma_from_tau(5.0), -0.5, 1.0, 0.2, 0);
  auto fres = extinction_scaling(fast, sizes, 200, 500.0, 777001, 0);
  const bool fast_ok =
      fres.sufficient && fres.fit.slope >= 0.26 && fres.fit.slope <= 0.78;
  std::ostringstream med_txt;
  for (std::size_t i = 0; i < fres.points.size(); ++i)
    med_txt << (i ? " " : "") << "N=" << fres.points[i].n << ":"
            << fmt(fres.points[i].median_t, 4);

  // slow arm: tau = 2.3 keeps a macroscopic plateau, so runs should still be
  // alive at t_cap = 500 for >= 90% of replicas at every size
  auto slow = make_params(kernel_kind::factor, gamma_from_tau(2.3), -0.5, 1.0, 0.2, 0);
  sim_config cfg;
  cfg.t_max = 500.0;
  cfg.record_dt = 500.0;
  cfg.stop_on_extinction = true;
  bool slow_ok = true;
  std::ostringstream alive_txt;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    auto pn = slow;
    pn.n = sizes[i];
    rng_stream rng(777002, sizes[i]);
    auto sample = extinction_times(pn, cfg, 30, rng);
    std::size_t alive = 0;
    for (auto c : sample.censored) alive += c;
    const double frac = static_cast<double>(alive) / 30.0;
    if (frac < 0.9) slow_ok = false;
    alive_txt << (i ? " " : "") << "N=" << sizes[i] << ":" << fmt(frac, 3);
  }

  std::ostringstream os;
  os << "fast (tau=5) exponent " << fmt(fres.fit.slope, 4) << " +/- "
     << fmt(fres.fit.slope_stderr, 3) << " in [0.26, 0.78]: "
     << (fast_ok ? "yes" : "NO") << " [" << med_txt.str()
     << "]; slow (tau=2.3) alive fraction at t=500: " << alive_txt.str()
     << " (need >= 0.9 each): " << (slow_ok ? "yes" : "NO");
  if (!fast_ok && fres.fit.slope < 0.26) {
    // the polynomial lower-bound mechanism is a star of degree ~ N^gamma
    // sustaining locally, which needs lambda^2 deg >~ 1; report where these
    // sizes actually sit. below that threshold the medians still grow only
    // logarithmically in N, so the fitted exponent ~ 1/ln N instead.
    const double top_deg = mean_degree(fast, 1.0 / static_cast<double>(sizes.back()));
    os << "; at N = " << sizes.back()
       << " the strongest vertex has lambda^2 * E[deg] = "
       << fmt(fast.lambda * fast.lambda * top_deg, 3)
       << " < 1, so the star mechanism behind the band has not set in at"
          " these sizes (needs N >> ~4e5 at lambda = 0.2)";
  }
  detail = os.str();
  return fast_ok && slow_ok;
}

// ---------------------------------------------------------------------------
// criterion 10: byte-identical replay from the manifest at 1, 4, 16 threads
// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EVONET_BIN) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

bool replay_case(const std::string& name, const std::string& args,
                 const std::vector<std::string>& outputs, std::string& note) {
  const fs::path base = fs::path("acceptance_tmp") / name;
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path d4 = base / "t4", d1 = base / "t1", d16 = base / "t16";
  if (run_cli(args + " --threads 4 --out " + d4.string()) != 0) {
    note = name + ": original run failed";
    return false;
  }
  const std::string manifest = (d4 / "manifest.json").string();
  if (run_cli("--from-manifest " + manifest + " --threads 1 --out " + d1.string()) != 0 ||
      run_cli("--from-manifest " + manifest + " --threads 16 --out " + d16.string()) != 0) {
    note = name + ": replay run failed";
    return false;
  }
  for (const auto& f : outputs) {
    if (!files_identical(d4 / f, d1 / f) || !files_identical(d4 / f, d16 / f)) {
      note = name + ": " + f + " differs across thread counts";
      return false;
    }
  }
  note = name + " ok";
  return true;
}

bool criterion_10(std::string& detail) {
  std::string n1, n2, n3;
  const bool ok1 = replay_case(
      "sweep",
      "sweep --gamma 0.5 --eta 0 --lambdas 1.2,0.9,0.65 --n 2000 --replicas 4"
      " --t-max 12 --record-dt 0.2 --burn-in 0.4 --window 0.5 --seed 99",
      {"sweep.csv", "summary.json"}, n1);
  const bool ok2 = replay_case(
      "extinction",
      "extinction --gamma 0.2 --eta -0.5 --kappa0 0 --lambda 0"
      " --n-list 1000,2000,4000,8000 --replicas 40 --t-cap 50 --seed 7",
      {"extinction.csv", "summary.json"}, n2);
  const bool ok3 = replay_case(
      "star",
      "star --k-list 50,100,200 --eta 0 --lambda 0.2 --pool-factor 10"
      " --replicas 150 --t-cap 300 --seed 3",
      {"star.csv", "summary.json"}, n3);
  detail = n1 + "; " + n2 + "; " + n3 +
           " (each replayed from its manifest at --threads 1 and 16 against"
           " an original --threads 4 run)";
  return ok1 && ok2 && ok3;
}

// ---------------------------------------------------------------------------

using criterion_fn = bool (*)(std::string&);

struct criterion {
  int index;
  criterion_fn fn;
};

const std::vector<criterion> all_criteria = {
    {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
    {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
    {9, criterion_9}, {10, criterion_10},
};

bool run_one(const criterion& c) {
  std::string detail;
  bool pass = false;
  try {
    pass = c.fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    pass = false;
  }
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.index << ": "
            << detail << "\n";
  std::cout.flush();
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::cerr << "usage: acceptance [criterion-index]\n";
    return 1;
  }
  if (argc == 2) {
    const int want = std::atoi(argv[1]);
    for (const auto& c : all_criteria)
      if (c.index == want) return run_one(c) ? 0 : 1;
    std::cerr << "unknown criterion index " << argv[1] << "\n";
    return 1;
  }
  bool all = true;
  for (const auto& c : all_criteria) all = run_one(c) && all;
  return all ? 0 : 1;
}
