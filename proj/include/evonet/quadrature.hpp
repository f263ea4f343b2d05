#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace evonet {

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

namespace quad {

struct result {
  double value = 0.0;
  double abs_error = 0.0;   // accumulated local error estimates
  long evaluations = 0;
  bool converged = true;
};

/*----------------------------------------------------------------------------
 * Adaptive Gauss–Kronrod 15(7) quadrature on a finite interval.
 *
 * The error on each subinterval is estimated from |K15 - G7| and the interval
 * is bisected until the local estimate meets the locally apportioned
 * tolerance.  This is enough for the integrands in this project, which are
 * smooth once endpoint singularities have been substituted away (below).
 *--------------------------------------------------------------------------*/
result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0,
                 int max_depth = 52);

/*----------------------------------------------------------------------------
 * ∫_0^b f(y) dy where f(y) ~ c·y^{-gamma} as y -> 0, with 0 < gamma < 1.
 *
 * Substituting y = u^{1/(1-gamma)} gives dy = u^{gamma/(1-gamma)}/(1-gamma) du
 * up to the constant, and the power cancels exactly:
 *     y^{-gamma} dy = du / (1-gamma),
 * so the transformed integrand is bounded at 0 and the plain adaptive rule
 * applies.  Integrands that are merely bounded near 0 are also fine (the
 * substitution is harmless).
 *--------------------------------------------------------------------------*/
result integrate_singular0(const std::function<double(double)>& f, double b,
                           double gamma, double rel_tol = 1e-10,
                           double abs_tol = 0.0);

/* throws numeric_error unless r.converged */
double require(const result& r, const char* context);

/*----------------------------------------------------------------------------
 * Tabulated score function s on a log grid, nonincreasing, s >= 1.
 *
 * Scores enter the master-inequality checker as data, not formulas, so the
 * checker is agnostic of where they came from.  Evaluation interpolates
 * linearly in (log x, log s), which is exact for pure powers — the score
 * families used in practice are piecewise powers.  Below the lowest abscissa
 * the table extrapolates with the power-law slope of its first segment
 * (queries above the highest abscissa clamp).
 *--------------------------------------------------------------------------*/
struct score_table {
  std::vector<double> x;  // strictly increasing, all > 0
  std::vector<double> s;  // s[i] = s(x[i])

  score_table() = default;
  score_table(std::vector<double> xs, std::vector<double> ss);

  double operator()(double xq) const;
  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }
  std::size_t size() const { return x.size(); }

  /* log-log slope of the first segment, used for tail extrapolation */
  double head_slope() const;

  void validate_nonincreasing() const;  // throws std::invalid_argument
};

/* s(x) tabulated on a log grid of `points` abscissae spanning [lo, hi] */
score_table tabulate_score(const std::function<double(double)>& s, double lo,
                           double hi, std::size_t points);

} // namespace quad
} // namespace evonet
