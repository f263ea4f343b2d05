#include "evonet/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace evonet {

// -------------------------------------------------------------------------
// fenwick tree
// -------------------------------------------------------------------------

fenwick_tree::fenwick_tree(std::size_t n) : n_(n), tree_(n + 1, 0) {
  top_ = 1;
  while (top_ * 2 <= n_) top_ *= 2;
}

void fenwick_tree::add(std::size_t i, std::int64_t delta) {
  if (i < 1 || i > n_) throw std::out_of_range("fenwick_tree::add");
  total_ += delta;
  for (; i <= n_; i += i & (~i + 1)) tree_[i] += delta;
}

std::int64_t fenwick_tree::prefix(std::size_t i) const {
  if (i > n_) throw std::out_of_range("fenwick_tree::prefix");
  std::int64_t s = 0;
  for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
  return s;
}

std::size_t fenwick_tree::find(std::int64_t r) const {
  if (r < 0 || r >= total_) throw std::out_of_range("fenwick_tree::find");
  std::size_t pos = 0;
  for (std::size_t step = top_; step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= n_ && tree_[next] <= r) {
      r -= tree_[next];
      pos = next;
    }
  }
  return pos + 1;
}

// -------------------------------------------------------------------------
// alias sampler
// -------------------------------------------------------------------------

discrete_sampler::discrete_sampler(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("discrete_sampler: empty weights");
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("discrete_sampler: negative weight");
    total_ += w;
  }
  threshold_.assign(n, 1.0);
  alias_.assign(n, 0);
  if (total_ <= 0.0) return;  // sampler unused when the channel rate is zero

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i)
    scaled[i] = weights[i] * static_cast<double>(n) / total_;

  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) threshold_[i] = 1.0;
  for (std::uint32_t i : small) threshold_[i] = 1.0;  // numerical leftovers
}

std::size_t discrete_sampler::sample(rng_stream& rng) const {
  const std::size_t i = static_cast<std::size_t>(rng.uniform_below(threshold_.size()));
  return rng.uniform() < threshold_[i] ? i : alias_[i];
}

// -------------------------------------------------------------------------
// engine
// -------------------------------------------------------------------------

namespace {

std::vector<double> update_weights(const model_params& params) {
  std::vector<double> w(params.n);
  for (std::uint64_t i = 1; i <= params.n; ++i)
    w[i - 1] = update_rate(params, i);
  return w;
}

} // namespace

sis_engine::sis_engine(const model_params& params, rng_stream& rng)
    : params_(params),
      rng_(rng),
      graph_(params),
      update_sampler_(update_weights(params)),
      update_rate_total_(update_sampler_.total()),
      weight_(params.n),
      is_infected_(params.n + 1, 0),
      where_(params.n + 1, 0) {
  graph_.init_stationary(rng_);
}

void sis_engine::infect(std::uint32_t v) {
  is_infected_[v] = 1;
  where_[v] = static_cast<std::uint32_t>(infected_.size());
  infected_.push_back(v);
  weight_.add(v, static_cast<std::int64_t>(graph_.degree(v)));
}

void sis_engine::recover_at(std::size_t list_pos) {
  const std::uint32_t v = infected_[list_pos];
  is_infected_[v] = 0;
  weight_.add(v, -static_cast<std::int64_t>(graph_.degree(v)));
  const std::uint32_t last = infected_.back();
  infected_[list_pos] = last;
  where_[last] = static_cast<std::uint32_t>(list_pos);
  infected_.pop_back();
}

void sis_engine::clear_infections() {
  for (std::uint32_t v : infected_) {
    is_infected_[v] = 0;
    weight_.add(v, -static_cast<std::int64_t>(graph_.degree(v)));
  }
  infected_.clear();
}

void sis_engine::check_bookkeeping() const {
  const std::uint64_t n = params_.n;
  std::size_t flagged = 0;
  for (std::uint32_t v = 1; v <= n; ++v) {
    const bool inf = is_infected_[v] != 0;
    if (inf) ++flagged;
    const std::int64_t want =
        inf ? static_cast<std::int64_t>(graph_.degree(v)) : 0;
    const std::int64_t have = weight_.prefix(v) - weight_.prefix(v - 1);
    if (have != want)
      throw std::logic_error("engine bookkeeping: stale degree weight for v=" +
                             std::to_string(v));
    if (inf) {
      const std::uint32_t pos = where_[v];
      if (pos >= infected_.size() || infected_[pos] != v)
        throw std::logic_error("engine bookkeeping: broken infected index");
    }
  }
  if (flagged != infected_.size())
    throw std::logic_error("engine bookkeeping: flag/list count mismatch");
  std::int64_t deg_sum = 0;
  for (std::uint32_t v : infected_)
    deg_sum += static_cast<std::int64_t>(graph_.degree(v));
  if (deg_sum != weight_.total())
    throw std::logic_error("engine bookkeeping: transmission weight drift");
}

trajectory sis_engine::run(const sim_config& cfg) {
  if (cfg.t_max < 0.0) throw std::domain_error("sim_config: t_max must be >= 0");
  if (!(cfg.record_dt > 0.0))
    throw std::invalid_argument("sim_config: record_dt must be > 0");

  clear_infections();
  switch (cfg.start) {
    case start_mode::all_infected:
      for (std::uint64_t v = 1; v <= params_.n; ++v)
        infect(static_cast<std::uint32_t>(v));
      break;
    case start_mode::single_seed:
      if (cfg.seed_vertex < 1 || cfg.seed_vertex > params_.n)
        throw std::out_of_range("sim_config: seed_vertex out of range");
      infect(cfg.seed_vertex);
      break;
    case start_mode::vertex_set:
      for (std::uint32_t v : cfg.initial_set) {
        if (v < 1 || v > params_.n)
          throw std::out_of_range("sim_config: initial_set vertex out of range");
        if (!is_infected_[v]) infect(v);
      }
      break;
  }

  trajectory out;
  out.n = params_.n;
  const double est_points = cfg.t_max / cfg.record_dt + 2.0;
  out.t.reserve(static_cast<std::size_t>(std::min(est_points, 1048576.0)));
  out.infected.reserve(out.t.capacity());

  // recording grid k * record_dt, k = 0, 1, ... (t = 0 holds the start state);
  // each point carries the last value before it (pre-event state)
  double t = 0.0;
  std::uint64_t rec_k = 0;
  double next_rec = 0.0;
  auto record_before = [&](double t_next) {
    while (next_rec <= cfg.t_max && next_rec < t_next) {
      out.t.push_back(next_rec);
      out.infected.push_back(infected_.size());
      ++rec_k;
      next_rec = cfg.record_dt * static_cast<double>(rec_k);
    }
  };

  bool extinct_now = infected_.empty();
  while (true) {
    if (extinct_now && !out.extinct) {
      out.extinct = true;
      out.extinction_time = t;
    }
    if (extinct_now && cfg.stop_on_extinction) break;

    const double rate_rec = static_cast<double>(infected_.size());
    const double rate_trans =
        params_.lambda * static_cast<double>(weight_.total());
    const double rate_total = update_rate_total_ + rate_rec + rate_trans;
    if (rate_total <= 0.0) break;  // frozen state (e.g. kappa0 = 0, extinct)

    const double dt = rng_.exponential(rate_total);
    if (t + dt >= cfg.t_max) break;
    t += dt;
    record_before(t);
    ++out.events;

    const double u = rng_.uniform() * rate_total;
    if (u < update_rate_total_) {
      const auto v = static_cast<std::uint32_t>(update_sampler_.sample(rng_) + 1);
      const auto delta = graph_.apply_vertex_update(v, rng_);
      if (is_infected_[v]) {
        const std::int64_t d = static_cast<std::int64_t>(delta.added.size()) -
                               static_cast<std::int64_t>(delta.removed.size());
        if (d != 0) weight_.add(v, d);
      }
      for (std::uint32_t j : delta.removed)
        if (is_infected_[j]) weight_.add(j, -1);
      for (std::uint32_t j : delta.added)
        if (is_infected_[j]) weight_.add(j, +1);
    } else if (u < update_rate_total_ + rate_rec) {
      const std::size_t pos =
          static_cast<std::size_t>(rng_.uniform_below(infected_.size()));
      recover_at(pos);
      if (infected_.empty()) extinct_now = true;
    } else {
      const std::size_t src = weight_.find(
          static_cast<std::int64_t>(rng_.uniform_below(
              static_cast<std::uint64_t>(weight_.total()))));
      const auto& nbrs = graph_.neighbors(static_cast<std::uint32_t>(src));
      const std::uint32_t dst =
          nbrs[static_cast<std::size_t>(rng_.uniform_below(nbrs.size()))];
      if (!is_infected_[dst]) infect(dst);
    }
  }

  record_before(cfg.t_max);
  // grid points at t_max exactly carry the final state
  while (next_rec <= cfg.t_max) {
    out.t.push_back(next_rec);
    out.infected.push_back(infected_.size());
    ++rec_k;
    next_rec = cfg.record_dt * static_cast<double>(rec_k);
  }
  out.final_infected = infected_.size();
  return out;
}

} // namespace evonet
