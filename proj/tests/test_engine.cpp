// the event-driven simulator against exactly solvable cases: isolated
// vertices, frozen complete graphs (whose extinction law an independent
// uniformized chain provides), coupled bookkeeping over long runs, and the
// recording grid contract.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ctmc_oracle.hpp"
#include "evonet/engine.hpp"
#include "evonet/stats.hpp"

using namespace evonet;

namespace {

model_params make(double gamma, double eta, double kappa0, double lambda,
                  std::uint64_t n, double beta = 1.0) {
  model_params p;
  p.kernel.kind = kernel_kind::factor;
  p.kernel.gamma = gamma;
  p.kernel.beta = beta;
  p.eta = eta;
  p.kappa0 = kappa0;
  p.lambda = lambda;
  p.n = n;
  return p;
}

sim_config basic_cfg(double t_max, double record_dt) {
  sim_config cfg;
  cfg.t_max = t_max;
  cfg.record_dt = record_dt;
  return cfg;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("fenwick tree: prefix sums and weighted search") {
  fenwick_tree f(10);
  f.add(3, 5);
  f.add(7, 2);
  f.add(10, 1);
  CHECK(f.total() == 8);
  CHECK(f.prefix(2) == 0);
  CHECK(f.prefix(3) == 5);
  CHECK(f.prefix(9) == 7);
  CHECK(f.find(0) == 3);
  CHECK(f.find(4) == 3);
  CHECK(f.find(5) == 7);
  CHECK(f.find(7) == 10);
  CHECK_THROWS_AS(f.find(8), std::out_of_range);
  f.add(3, -5);
  CHECK(f.total() == 3);
  CHECK(f.find(0) == 7);
}

TEST_CASE("discrete sampler reproduces its weights") {
  std::vector<double> w = {0.5, 0.0, 2.0, 1.5};
  discrete_sampler ds(w);
  CHECK(ds.total() == doctest::Approx(4.0));
  rng_stream rng(17, 0);
  const std::size_t n = 200000;
  std::vector<double> counts(w.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[ds.sample(rng)] += 1.0;
  CHECK(counts[1] == 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    const double p = w[k] / 4.0;
    const double se = std::sqrt(p * (1.0 - p) / double(n));
    CHECK(std::fabs(counts[k] / double(n) - p) < 5.0 * se);
  }
}

TEST_CASE("an isolated vertex dies at rate one") {
  auto p = make(0.5, 0.0, 1.0, 0.7, 1);
  rng_stream rng(1001, 0);
  const std::size_t reps = 20000;
  std::size_t alive_at_1 = 0;
  double t_sum = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    sis_engine eng(p, rng);
    auto traj = eng.run(basic_cfg(1.0, 1.0));
    if (!traj.extinct)
      ++alive_at_1;
    else
      t_sum += traj.extinction_time;
  }
  const double p_surv = double(alive_at_1) / double(reps);
  const double truth = std::exp(-1.0);
  const double se = std::sqrt(truth * (1.0 - truth) / double(reps));
  CHECK(std::fabs(p_surv - truth) < 4.0 * se);
  // conditional mean of Exp(1) given T < 1: (1 - 2 e^{-1}) / (1 - e^{-1})
  const double cond = (1.0 - 2.0 * std::exp(-1.0)) / (1.0 - std::exp(-1.0));
  CHECK(t_sum / double(reps - alive_at_1) == doctest::Approx(cond).epsilon(0.05));
}

TEST_CASE("lambda = 0: extinction is the maximum of N unit clocks") {
  auto p = make(0.5, 0.0, 1.0, 0.0, 10);
  rng_stream rng(77, 3);
  const std::size_t reps = 20000;
  std::vector<double> times;
  times.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    sis_engine eng(p, rng);
    auto traj = eng.run(basic_cfg(100.0, 100.0));
    REQUIRE(traj.extinct);
    times.push_back(traj.extinction_time);
  }
  auto ms = stats::mean_stderr(times);
  // E[max of 10] = H_10 = 2.9289682539682538
  CHECK(std::fabs(ms.mean - 2.9289682539682538) < 4.5 * ms.stderr_);
  // exact median: log(1 / (1 - 2^{-1/10})) = 2.7035551918624043
  CHECK(std::fabs(stats::median(times) - 2.7035551918624043) < 0.05);
  // and the sample against the exact CDF (1 - e^{-t})^{10}
  const double d = stats::ks_statistic(
      times, [](double t) { return std::pow(1.0 - std::exp(-t), 10.0); });
  CHECK(stats::ks_pvalue(d, times.size()) > 0.001);
}

TEST_CASE("frozen complete graph matches the uniformized chain (N=5)") {
  // beta = 5 makes every pairwise probability saturate at 1; kappa0 = 0
  // freezes the graph, so the engine runs the plain contact process on K5
  auto p = make(0.5, 0.0, 0.0, 0.3, 5, 5.0);
  rng_stream rng(90210, 2);
  const std::size_t reps = 20000;
  std::vector<double> times;
  times.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    sis_engine eng(p, rng);
    REQUIRE(eng.graph().edge_count() == 10);
    auto traj = eng.run(basic_cfg(200.0, 200.0));
    REQUIRE(traj.extinct);
    times.push_back(traj.extinction_time);
  }
  ctmc::sis_extinction_cdf oracle(5, ctmc::complete_edges(5), 0.3, 220.0);
  const double d = stats::ks_statistic(times, [&](double t) { return oracle(t); });
  CHECK(stats::ks_pvalue(d, times.size()) > 0.001);
  // the oracle itself integrates to the exact mean 311821/75000
  double mean = 0.0;
  const double dt = 0.005;
  for (double t = 0.0; t < 80.0; t += dt)
    mean += (1.0 - oracle(t + 0.5 * dt)) * dt;
  CHECK(mean == doctest::Approx(311821.0 / 75000.0).epsilon(1e-4));
  // and the engine's sample mean agrees with it
  auto ms = stats::mean_stderr(times);
  CHECK(std::fabs(ms.mean - 311821.0 / 75000.0) < 4.5 * ms.stderr_);
}

TEST_CASE("frozen two-vertex graph: mean extinction 1.7 at lambda 0.4") {
  auto p = make(0.5, 0.0, 0.0, 0.4, 2, 1.5);
  rng_stream rng(555, 0);
  const std::size_t reps = 30000;
  std::vector<double> times;
  times.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    sis_engine eng(p, rng);
    REQUIRE(eng.graph().edge_count() == 1);
    auto traj = eng.run(basic_cfg(150.0, 150.0));
    REQUIRE(traj.extinct);
    times.push_back(traj.extinction_time);
  }
  auto ms = stats::mean_stderr(times);
  CHECK(std::fabs(ms.mean - 1.7) < 4.5 * ms.stderr_);
}

TEST_CASE("recording grid: t = 0 start state, fixed step, tail fill") {
  auto p = make(0.5, 0.0, 1.0, 0.2, 3);
  rng_stream rng(3, 3);
  sis_engine eng(p, rng);
  auto cfg = basic_cfg(1.0, 0.25);
  cfg.stop_on_extinction = false;
  auto traj = eng.run(cfg);
  REQUIRE(traj.t.size() == 5);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(traj.t[k] == doctest::Approx(0.25 * double(k)).epsilon(1e-12));
  CHECK(traj.infected[0] == 3);  // all-infected start
  CHECK(traj.n == 3);
  // infected counts never exceed N
  for (auto c : traj.infected) CHECK(c <= 3);
  // an extinct run keeps reporting zero to the end of the grid
  auto cfg2 = basic_cfg(400.0, 100.0);
  cfg2.stop_on_extinction = false;
  auto traj2 = eng.run(cfg2);
  REQUIRE(traj2.extinct);
  CHECK(traj2.t.size() == 5);
  CHECK(traj2.infected.back() == 0);
  CHECK(traj2.final_infected == 0);
  CHECK(traj2.extinction_time <= 400.0);
}

TEST_CASE("start modes and validation") {
  auto p = make(0.5, 0.0, 1.0, 0.2, 8);
  rng_stream rng(11, 4);
  sis_engine eng(p, rng);

  auto cfg = basic_cfg(0.5, 0.5);
  cfg.start = start_mode::single_seed;
  cfg.seed_vertex = 5;
  auto traj = eng.run(cfg);
  CHECK(traj.infected[0] == 1);

  cfg.start = start_mode::vertex_set;
  cfg.initial_set = {2, 7, 7};  // duplicate collapses
  traj = eng.run(cfg);
  CHECK(traj.infected[0] == 2);

  cfg.initial_set = {0};
  CHECK_THROWS_AS(eng.run(cfg), std::out_of_range);
  cfg.initial_set = {9};
  CHECK_THROWS_AS(eng.run(cfg), std::out_of_range);

  cfg = basic_cfg(1.0, 0.0);
  CHECK_THROWS_AS(eng.run(cfg), std::invalid_argument);
  cfg = basic_cfg(-1.0, 0.1);
  CHECK_THROWS_AS(eng.run(cfg), std::domain_error);
  cfg = basic_cfg(1.0, 0.1);
  cfg.start = start_mode::single_seed;
  cfg.seed_vertex = 0;
  CHECK_THROWS_AS(eng.run(cfg), std::out_of_range);
}

TEST_CASE("incremental rate bookkeeping survives a million events") {
  auto p = make(0.5, -0.5, 1.0, 0.35, 400);
  rng_stream rng(123456, 0);
  sis_engine eng(p, rng);
  auto cfg = basic_cfg(25.0, 5.0);
  cfg.stop_on_extinction = false;  // keep the graph churning regardless
  std::uint64_t events = 0;
  int runs = 0;
  while (events < 1000000 && runs < 400) {
    auto traj = eng.run(cfg);
    events += traj.events;
    ++runs;
    eng.check_bookkeeping();  // throws std::logic_error on any drift
    eng.graph().check_invariants();
  }
  REQUIRE(events >= 1000000);
}

TEST_CASE("survival is monotone in lambda and in the initial set") {
  const std::size_t reps = 1500;
  const double t_end = 4.0;
  auto run_surv = [&](double lambda, start_mode mode) {
    auto p = make(0.5, 0.0, 1.0, lambda, 150);
    rng_stream rng(2468, 1);
    std::size_t alive = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      sis_engine eng(p, rng);
      auto cfg = basic_cfg(t_end, t_end);
      cfg.start = mode;
      cfg.seed_vertex = 1;
      auto traj = eng.run(cfg);
      if (!traj.extinct) ++alive;
    }
    return double(alive) / double(reps);
  };
  const double lo = run_surv(0.1, start_mode::all_infected);
  const double hi = run_surv(0.6, start_mode::all_infected);
  const double se = std::sqrt(0.25 / double(reps));
  CHECK(hi > lo - 4.0 * se);

  const double seed = run_surv(0.6, start_mode::single_seed);
  CHECK(hi > seed - 4.0 * se);  // larger initial sets survive longer
}

} // TEST_SUITE
