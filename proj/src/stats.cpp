#include "evonet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evonet {
namespace stats {

summary mean_stderr(const std::vector<double>& xs) {
  summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double acc = 0.0;
  for (double v : xs) acc += v;
  s.mean = acc / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double v : xs) {
      const double d = v - s.mean;
      ss += d * d;
    }
    const double var = ss / static_cast<double>(xs.size() - 1);
    s.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return s;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  const std::size_t n = xs.size();
  const std::size_t mid = n / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  double hi = xs[mid];
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(xs.begin(), xs.begin() + mid);
  return 0.5 * (lo + hi);
}

fit_result weighted_least_squares(const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  bool residual_scaled) {
  if (x.size() != y.size() || x.size() != w.size())
    throw std::invalid_argument("weighted_least_squares: size mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("weighted_least_squares: need >= 2 points");

  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0.0))
      throw std::invalid_argument("weighted_least_squares: weights must be > 0");
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("weighted_least_squares: degenerate abscissae");

  fit_result f;
  f.points = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = ybar - f.slope * xbar;
  f.slope_stderr = std::sqrt(1.0 / sxx);
  if (residual_scaled && x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += w[i] * r * r;
    }
    f.slope_stderr = std::sqrt(rss / (static_cast<double>(x.size()) - 2.0) / sxx);
  }
  return f;
}

/*============================================================================
 * Regularized incomplete gamma, by series (x < a+1) or continued fraction.
 *==========================================================================*/
namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::domain_error("regularized_gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::domain_error("regularized_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double k) {
  return regularized_gamma_q(0.5 * k, 0.5 * x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(hi - f)));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  // below lambda ~ 0.3 the true p-value is 1 to more than 8 digits, and the
  // alternating series needs far more than 100 terms to converge there
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

double chi_square_stat(const std::vector<double>& observed,
                       const std::vector<double>& expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_stat: size mismatch");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0))
      throw std::invalid_argument("chi_square_stat: expected counts must be > 0");
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

} // namespace stats
} // namespace evonet
