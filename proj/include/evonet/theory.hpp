// closed-form regime classification and metastable exponents, the survival
// strategy table with optimal star thresholds a(lambda), and numerical
// verification of the master inequalities that drive the upper bounds.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "evonet/params.hpp"
#include "evonet/quadrature.hpp"

namespace evonet {

// -------------------------------------------------------------------------
// regimes
// -------------------------------------------------------------------------

enum class regime_kind { ultra_fast, fast, slow_metastable, boundary };
const char* to_string(regime_kind k);

struct regime {
  regime_kind kind;
  std::string description;  // non-empty only for boundary points
};

// partition of the (tau, eta) plane for a given kernel. points on the
// defining equalities (relative tolerance 1e-12) come back as boundary.
regime classify_regime(kernel_kind kind, double tau, double eta);

// -------------------------------------------------------------------------
// metastable exponent
// -------------------------------------------------------------------------

// xi such that the metastable density scales like lambda^xi. only defined in
// the slow regime; throws std::domain_error otherwise. when several branch
// regions touch at (tau, eta) all applicable values are cross-checked to
// 1e-9 (std::logic_error on disagreement). branch_id, when non-null,
// receives a label like "F3" (factor) or "P2" (pref-attach).
double exponent_closed_form(kernel_kind kind, double tau, double eta,
                            std::string* branch_id = nullptr);

// -------------------------------------------------------------------------
// survival strategies
// -------------------------------------------------------------------------

enum class strategy {
  quick_direct,
  quick_indirect,
  local_survival,
  delayed_direct,
  delayed_depleted_direct,
  delayed_indirect,
};
const char* to_string(strategy s);
inline constexpr std::array<strategy, 6> all_strategies = {
    strategy::quick_direct,         strategy::quick_indirect,
    strategy::local_survival,       strategy::delayed_direct,
    strategy::delayed_depleted_direct, strategy::delayed_indirect,
};

struct strategy_row {
  strategy strat;
  bool feasible;
  double exponent;    // lambda-exponent of the density bound lambda*a^{1-gamma}
  double a_exponent;  // a = lambda^{a_exponent}; NaN when the formula degenerates
  std::string region; // feasibility region in (tau, eta)
};

std::vector<strategy_row> strategy_table(kernel_kind kind, double tau,
                                         double eta);

struct dominating_result {
  double xi;
  strategy strat;  // first feasible row attaining the minimum
};

// minimum density exponent over feasible strategies; must agree with
// exponent_closed_form (the tests assert this across the phase plane).
// slow regime only; empty feasible set inside it is an internal coverage
// failure and throws std::logic_error.
dominating_result exponent_via_strategies(kernel_kind kind, double tau,
                                          double eta);

// everything above bundled, for reports and the CLI
struct theory_report {
  kernel_kind kind;
  double tau;
  double eta;
  regime reg;
  double xi;            // NaN unless slow
  strategy dominating;  // meaningful only when slow
  double a_exponent;    // a(lambda) exponent of the dominating strategy; NaN unless slow
  std::string xi_branch;
  std::vector<strategy_row> table;
};
theory_report analyze(kernel_kind kind, double tau, double eta);

// -------------------------------------------------------------------------
// optimal star threshold
// -------------------------------------------------------------------------

struct optimal_a_result {
  double a;             // scale_c * lambda^exponent
  double exponent;
  std::string binding;  // the defining inequality that pins a
  bool cond_i;          // p(a,1) <= e^{1/lambda}
  bool cond_ii;         // lambda^2 p(a,1) > -cond_c * log(a*lambda)
};

// beta = 1 throughout (exponents do not depend on it). scale_c is the
// undetermined constant in a = C*lambda^e; cond_c the one in condition (ii).
// infeasible strategies throw std::domain_error naming the region.
optimal_a_result optimal_a(strategy st, kernel_kind kind, double gamma,
                           double eta, double lambda, double scale_c = 1.0,
                           double cond_c = 1.0);

// -------------------------------------------------------------------------
// master inequalities
// -------------------------------------------------------------------------

enum class mi_variant {
  imi_quick,
  imi_slow,
  omi_weak,
  omi_strong_quick,
  omi_strong_slow,
  da_factor,
};
const char* to_string(mi_variant v);
mi_variant mi_variant_from_string(const std::string& name);

struct mi_report {
  double lhs_max_ratio;  // max over the class range of lhs(x)/s(x); D_a itself
                         // for the da_factor variant
  bool satisfied;        // lhs_max_ratio <= 1
  double worst_x;        // argmax (the threshold a for da_factor)
};

// evaluates the requested inequality at >= 512 log-spaced x in the variant's
// vertex class (quick / slow / weak / strong, from thresholds()). the score
// s must be nonincreasing and >= 1; integrals in y are computed exactly
// segment-by-segment (every factor of the integrand is a power law between
// consecutive breakpoints). `constant` is the multiplicative constant on the
// left side (7 for the inner variants; the configurable one for the outer).
mi_report check_master_inequality(mi_variant v, const model_params& params,
                                  double a, const quad::score_table& s,
                                  double constant);

// a + 7/(6 s(a)) * integral of s over [a,1]
double upper_density_bound(const model_params& params, double a,
                           const quad::score_table& s);

// convenience used by the CLI and the acceptance checks: tabulate
// s(x) = T^loc(x) * x^{-gamma} on a log grid
quad::score_table tloc_power_score(const model_params& params, double lo,
                                   std::size_t points);

} // namespace evonet
