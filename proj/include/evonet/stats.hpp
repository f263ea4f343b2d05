#pragma once

#include <functional>
#include <vector>

namespace evonet {
namespace stats {

struct summary {
  double mean = 0.0;
  double stderr_ = 0.0;  // standard error of the mean
  std::size_t n = 0;
};

summary mean_stderr(const std::vector<double>& xs);

/* sample median (average of the two central order statistics for even n) */
double median(std::vector<double> xs);

struct fit_result {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

/*----------------------------------------------------------------------------
 * Weighted least squares y ≈ intercept + slope·x with weights w_i.
 * When w_i = 1/stderr_i², slope_stderr is the usual 1/sqrt(Σw(x-x̄_w)²).
 * Unweighted callers pass w_i = 1; then slope_stderr additionally scales
 * with the residual variance (ordinary least squares standard error).
 *--------------------------------------------------------------------------*/
fit_result weighted_least_squares(const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  bool residual_scaled = false);

/* regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x) */
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/* survival function of the chi-square distribution with k dof */
double chi_square_sf(double x, double k);

double normal_cdf(double z);

/* Kolmogorov–Smirnov statistic of samples against a CDF (samples any order) */
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

/* asymptotic two-sided KS p-value at sample size n */
double ks_pvalue(double d, std::size_t n);

/* Pearson statistic Σ(O-E)²/E; E entries must be positive */
double chi_square_stat(const std::vector<double>& observed,
                       const std::vector<double>& expected);

} // namespace stats
} // namespace evonet
