#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evonet/engine.hpp"
#include "evonet/params.hpp"
#include "evonet/rng.hpp"
#include "evonet/stats.hpp"

namespace evonet {

/*----------------------------------------------------------------------------
 * Multi-run studies on top of the event engine: density curves, metastable
 * plateaus and their lambda-scaling, extinction-time scaling in the network
 * size, the isolated-star survival model, and the duality cross-check.
 *
 * Reproducibility: every replica is driven by its own rng_stream derived from
 * (master_seed, replica index) and writes into a preassigned result slot, so
 * aggregated outputs are bit-identical for any thread count.
 *--------------------------------------------------------------------------*/

/* run body(0), ..., body(count-1), each exactly once, on `threads` workers
 * (0 = hardware concurrency); exceptions are collected and rethrown */
void parallel_replicas(std::uint64_t count, unsigned threads,
                       const std::function<void(std::uint64_t)>& body);

/*----------------------------------------------------------------------------
 * density curve / single-seed survival / extinction samples
 *--------------------------------------------------------------------------*/

struct in_point {
  double t = 0.0;
  double mean = 0.0;  // infected fraction averaged over replicas
  double se = 0.0;
};

/* expected infected fraction I_N on the recording grid of cfg; every replica
 * runs on a freshly drawn stationary graph (replicas >= 2) */
std::vector<in_point> estimate_in(const model_params& params, const sim_config& cfg,
                                  std::uint64_t replicas, rng_stream& rng);

struct proportion {
  double p = 0.0;
  double se = 0.0;
};

/* P(process started from seed_vertex is still alive at time t) */
proportion survival_single_seed(const model_params& params, std::uint32_t seed_vertex,
                                double t, std::uint64_t replicas, rng_stream& rng);

struct extinction_sample {
  std::vector<double> t_ext;            // censored entries hold cfg.t_max
  std::vector<std::uint8_t> censored;   // 1 when the run hit t_max alive
};

/* extinction times of repeated runs under cfg (requires stop_on_extinction) */
extinction_sample extinction_times(const model_params& params, const sim_config& cfg,
                                   std::uint64_t replicas, rng_stream& rng);

/*----------------------------------------------------------------------------
 * plateau detection and log-log fits
 *--------------------------------------------------------------------------*/

struct plateau_result {
  double rho_hat = 0.0;
  double se = 0.0;
  bool stable = false;
};

/* mean infected density over the window [burn_in, burn_in + window] (both as
 * fractions of the trajectory horizon); stable means the two halves of the
 * window agree to within 10% relative drift.  A run that went extinct before
 * the window opens reports rho_hat = 0, stable = false. */
plateau_result plateau_density(const trajectory& traj, double burn_in, double window);

/* weighted least-squares fit of log y against log x; weights come from the
 * delta method, w_i = (y_i / se_i)^2, with a tiny floor for exact points */
stats::fit_result fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& se);

/*----------------------------------------------------------------------------
 * lambda sweep: plateau density against infection rate
 *--------------------------------------------------------------------------*/

struct sweep_config {
  model_params params;              // template; n and lambda are overridden
  std::vector<double> lambda_list;  // strictly decreasing, all > 0
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  double burn_in = 0.3;             // fraction of the horizon
  double window = 0.5;              // fraction of the horizon
  double t_max = 10.0;
  double record_dt = 0.05;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;             // 0 = hardware concurrency

  void validate() const;
};

struct sweep_row {
  double lambda = 0.0;
  double rho_hat = 0.0;
  double se = 0.0;
  bool stable = false;
};

struct sweep_result {
  std::vector<sweep_row> rows;      // one per lambda, in input order
  stats::fit_result fit;            // log rho_hat vs log lambda, stable rows
  bool sufficient = false;          // >= 3 stable rows entered the fit
};

sweep_result sweep_lambda(const sweep_config& cfg);

/*----------------------------------------------------------------------------
 * extinction-time scaling in the network size (fast regimes only)
 *--------------------------------------------------------------------------*/

struct extinction_point {
  std::uint64_t n = 0;
  double median_t = 0.0;
  double se = 0.0;            // asymptotic median stderr via the IQR
  double censored_frac = 0.0;
  bool usable = false;        // censored fraction <= 50%
};

struct extinction_scaling_result {
  std::vector<extinction_point> points;
  std::vector<extinction_sample> samples;  // per n, for file export
  stats::fit_result fit;                   // log median vs log n, usable points
  bool sufficient = false;                 // >= 3 usable points entered the fit
};

/* medians of the all-infected extinction time across n_list (>= 4 sizes
 * spanning at least a factor 8); rejects (tau, eta) outside the fast and
 * ultra-fast regimes */
extinction_scaling_result extinction_scaling(const model_params& tmpl,
                                             const std::vector<std::uint64_t>& n_list,
                                             std::uint64_t replicas, double t_cap,
                                             std::uint64_t master_seed,
                                             unsigned threads = 0);

/*----------------------------------------------------------------------------
 * isolated-star survival
 *
 * Abstraction of a hub of polynomial degree k embedded in the evolving
 * network: the hub updates at rate kappa0 * k^eta, a pool of pool_factor * k
 * potential leaves is tracked by counts (infected / connected-healthy /
 * unconnected), each pool vertex is connected with probability 1/pool_factor
 * after any update, leaves update at rate kappa0 and recover at rate 1, and
 * infection crosses present edges at rate lambda.  Runs start from an
 * infected hub with stationary connections and stop at extinction or t_cap.
 *--------------------------------------------------------------------------*/

struct star_point {
  std::uint64_t k = 0;
  double mean_time = 0.0;     // mean of min(T_ext, t_cap)
  double se = 0.0;
  double censored_frac = 0.0;
};

struct star_result {
  std::vector<star_point> points;
  stats::fit_result fit;      // log mean_time vs log k over points with se > 0
  bool sufficient = false;    // >= 3 points entered the fit
  std::string warning;        // set when lambda^2 * min(k) is too small
};

star_result star_survival(const std::vector<std::uint64_t>& k_list, double eta,
                          double lambda, double kappa0, std::uint64_t pool_factor,
                          std::uint64_t replicas, double t_cap,
                          std::uint64_t master_seed, unsigned threads = 0);

/*----------------------------------------------------------------------------
 * duality check: all-infected density vs averaged single-seed survival
 *--------------------------------------------------------------------------*/

struct duality_result {
  double i_n = 0.0;       // infected fraction at t, all-infected start
  double i_n_se = 0.0;
  double dual = 0.0;      // survival probability at t, uniform single seed
  double dual_se = 0.0;
  double z = 0.0;         // |i_n - dual| / combined stderr (0 when equal)
};

/* small networks only (n <= 32); side A uses stream (master_seed, 0), side B
 * stream (master_seed, 1) with seeds cycling round-robin over the vertices */
duality_result duality_check(const model_params& params, double t,
                             std::uint64_t replicas, std::uint64_t master_seed);

} // namespace evonet
