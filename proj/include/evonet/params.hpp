#pragma once

#include <cstdint>
#include <string>

namespace evonet {

/*----------------------------------------------------------------------------
 * Model parameterization.
 *
 * Vertices are ranked i = 1..N with relative rank x = i/N in (0,1].  The
 * kernel p(x,y) sets connection intensities, each unordered pair being
 * present independently with probability  p_ij = min(p(i/N, j/N)/N, 1)
 * (truncation applied per pair, no global renormalization).  Vertex i
 * updates at rate kappa(x) = kappa0 * x^(-gamma*eta): it drops all incident
 * edges and resamples them.  Infected vertices recover at rate 1 and push
 * infection over each present edge at rate lambda.
 *
 * Degree tail exponent: tau = 1 + 1/gamma.
 *--------------------------------------------------------------------------*/

enum class kernel_kind { factor, pref_attach };

const char* to_string(kernel_kind k);

struct kernel_spec {
  kernel_kind kind = kernel_kind::factor;
  double beta = 1.0;   // kernel amplitude
  double gamma = 0.5;  // tail parameter, in (0,1)

  void validate() const;  // throws std::domain_error
};

struct model_params {
  std::uint64_t n = 0;  // vertex count N
  kernel_spec kernel;
  double eta = 0.0;     // update-speed exponent
  double kappa0 = 1.0;  // base update rate
  double lambda = 0.0;  // infection rate

  void validate() const;  // throws std::domain_error

  /* Sum_i kappa_i * E[deg_i] stays O(N) iff gamma*(1+eta) < 1 when eta > 0;
     a false return is a documented workload warning, not an error. */
  bool finite_workload() const;
};

double tau_from_gamma(double gamma);
double gamma_from_tau(double tau);

/* closed-form kernel value p(x,y); symmetric, nonincreasing in each argument */
double kernel_eval(const kernel_spec& kernel, double x, double y);

/* p_ij = min(p(i/N, j/N)/N, 1); i, j are 1-based and distinct */
double connection_prob(const model_params& params, std::uint64_t i,
                       std::uint64_t j);

/* kappa_i = kappa0 * (i/N)^(-gamma*eta) */
double update_rate(const model_params& params, std::uint64_t i);
double update_rate_x(const model_params& params, double x);

/* closed form of the limiting mean degree  integral_0^1 p(x,y) dy */
double mean_degree(const model_params& params, double x);

/*----------------------------------------------------------------------------
 * pi(x) = integral_0^1 p(x,y) / (kappa(x) + kappa(y)) dy.
 *
 * The integrand carries the kernel's y^-gamma endpoint singularity, handled
 * by the substitution quadrature (see quadrature.hpp); for the preferential
 * attachment kernel the integral is split at y = x where the kernel kinks.
 * Relative tolerance 1e-8; non-convergence throws numeric_error.
 *--------------------------------------------------------------------------*/
double pi_integral(const model_params& params, double x);

/* T^loc(x) = max{ 8, 8/(3 kappa(x)), 16 lambda^2 pi(x)/kappa(x) } */
double t_loc_upper(const model_params& params, double x);

/* T_loc(a, lambda) = lambda^2 p(a,1) / kappa(a) */
double t_loc_lower(const model_params& params, double a);

/*----------------------------------------------------------------------------
 * Vertex-class thresholds.
 *
 * A vertex of rank x is quick when kappa(x) >= lambda.  For eta < 0 that
 * means x >= a_sl with a_sl = (lambda/kappa0)^(-1/(gamma*eta)).  For eta >= 0
 * (with lambda <= kappa0, the regime the upper-bound theory works in) every
 * vertex is quick; that case is represented by all_quick = true and
 * a_sl = 0 — an explicit flag, not a magic float.
 *
 * a_str = sup{ x : mean_degree(x) > 1/(10 lambda^2) }, found by bisection on
 * the monotone mean_degree and clamped to 1 when even rank 1 clears the
 * threshold.  a_ssl = min(a_str, a_sl), with a_sl treated as "no constraint"
 * when all vertices are quick.
 *--------------------------------------------------------------------------*/
struct threshold_set {
  double a_sl = 0.0;
  bool all_quick = false;
  double a_str = 0.0;
  double a_ssl = 0.0;
  std::string note;  // nonempty when outside the theory's comfort zone
};

threshold_set thresholds(const model_params& params);

/*----------------------------------------------------------------------------
 * Witness constants for the kernel sandwich  c1·a^-gamma <= p(a,1) and
 * integral p(a,s) ds <= c2·a^-gamma, verified on a log grid of a in
 * [1e-6, 1/2].  The margin on c2 is 10%.  A violated sample indicates an
 * implementation bug and throws std::logic_error.
 *--------------------------------------------------------------------------*/
struct condp_witness {
  double c1 = 0.0;
  double c2 = 0.0;
};

condp_witness validate_condp(const kernel_spec& kernel);

} // namespace evonet
