#include "evonet/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evonet/quadrature.hpp"

namespace evonet {

const char* to_string(kernel_kind k) {
  return k == kernel_kind::factor ? "factor" : "pref_attach";
}

void kernel_spec::validate() const {
  if (!(beta > 0.0)) throw std::domain_error("kernel: beta must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("kernel: gamma must be in (0,1)");
}

void model_params::validate() const {
  kernel.validate();
  if (n == 0) throw std::domain_error("params: n must be >= 1");
  if (!(kappa0 >= 0.0)) throw std::domain_error("params: kappa0 must be >= 0");
  if (!(lambda >= 0.0)) throw std::domain_error("params: lambda must be >= 0");
  if (!std::isfinite(eta)) throw std::domain_error("params: eta must be finite");
}

bool model_params::finite_workload() const {
  if (eta <= 0.0) return true;
  return kernel.gamma * (1.0 + eta) < 1.0;
}

double tau_from_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("tau_from_gamma: gamma must be in (0,1)");
  return 1.0 + 1.0 / gamma;
}

double gamma_from_tau(double tau) {
  if (!(tau > 2.0)) throw std::domain_error("gamma_from_tau: tau must be > 2");
  return 1.0 / (tau - 1.0);
}

double kernel_eval(const kernel_spec& kernel, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::domain_error("kernel_eval: arguments must be > 0");
  switch (kernel.kind) {
    case kernel_kind::factor:
      return kernel.beta * std::pow(x, -kernel.gamma) * std::pow(y, -kernel.gamma);
    case kernel_kind::pref_attach: {
      const double lo = std::min(x, y);
      const double hi = std::max(x, y);
      return kernel.beta * std::pow(lo, -kernel.gamma) *
             std::pow(hi, kernel.gamma - 1.0);
    }
  }
  throw std::logic_error("kernel_eval: unreachable");
}

double connection_prob(const model_params& params, std::uint64_t i,
                       std::uint64_t j) {
  if (i == j) throw std::invalid_argument("connection_prob: i == j");
  if (i < 1 || i > params.n || j < 1 || j > params.n)
    throw std::out_of_range("connection_prob: vertex index out of range");
  const double n = static_cast<double>(params.n);
  const double p =
      kernel_eval(params.kernel, static_cast<double>(i) / n,
                  static_cast<double>(j) / n) /
      n;
  return std::min(p, 1.0);
}

double update_rate_x(const model_params& params, double x) {
  if (!(x > 0.0)) throw std::domain_error("update_rate: rank must be > 0");
  return params.kappa0 * std::pow(x, -params.kernel.gamma * params.eta);
}

double update_rate(const model_params& params, std::uint64_t i) {
  if (i < 1 || i > params.n)
    throw std::out_of_range("update_rate: vertex index out of range");
  return update_rate_x(params,
                       static_cast<double>(i) / static_cast<double>(params.n));
}

double mean_degree(const model_params& params, double x) {
  if (!(x > 0.0 && x <= 1.0))
    throw std::domain_error("mean_degree: x must be in (0,1]");
  const double beta = params.kernel.beta;
  const double g = params.kernel.gamma;
  switch (params.kernel.kind) {
    case kernel_kind::factor:
      return beta * std::pow(x, -g) / (1.0 - g);
    case kernel_kind::pref_attach:
      // split integral at y = x:  beta/(1-gamma) + beta (x^-gamma - 1)/gamma
      return beta * (1.0 / (1.0 - g) + (std::pow(x, -g) - 1.0) / g);
  }
  throw std::logic_error("mean_degree: unreachable");
}

double pi_integral(const model_params& params, double x) {
  if (!(x > 0.0 && x <= 1.0))
    throw std::domain_error("pi_integral: x must be in (0,1]");
  const double kx = update_rate_x(params, x);
  auto integrand = [&](double y) {
    return kernel_eval(params.kernel, x, y) / (kx + update_rate_x(params, y));
  };
  const double g = params.kernel.gamma;
  quad::result r;
  if (params.kernel.kind == kernel_kind::pref_attach && x < 1.0) {
    // kernel kinks at y = x; integrate the singular piece and the tail apart
    quad::result head = quad::integrate_singular0(integrand, x, g, 1e-9);
    quad::result tail = quad::integrate(integrand, x, 1.0, 1e-9);
    r.value = head.value + tail.value;
    r.converged = head.converged && tail.converged;
    r.evaluations = head.evaluations + tail.evaluations;
  } else {
    r = quad::integrate_singular0(integrand, 1.0, g, 1e-9);
  }
  return quad::require(r, "pi_integral");
}

double t_loc_upper(const model_params& params, double x) {
  const double k = update_rate_x(params, x);
  const double branch1 = 8.0;
  const double branch2 = k > 0.0 ? 8.0 / (3.0 * k)
                                 : std::numeric_limits<double>::infinity();
  double branch3 = 0.0;
  if (params.lambda > 0.0) {
    branch3 = k > 0.0 ? 16.0 * params.lambda * params.lambda *
                            pi_integral(params, x) / k
                      : std::numeric_limits<double>::infinity();
  }
  return std::max(branch1, std::max(branch2, branch3));
}

double t_loc_lower(const model_params& params, double a) {
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error("t_loc_lower: a must be in (0,1)");
  return params.lambda * params.lambda * kernel_eval(params.kernel, a, 1.0) /
         update_rate_x(params, a);
}

threshold_set thresholds(const model_params& params) {
  if (!(params.lambda > 0.0))
    throw std::domain_error("thresholds: lambda must be > 0");
  threshold_set t;

  if (params.eta < 0.0) {
    const double e = -1.0 / (params.kernel.gamma * params.eta);
    double a = std::pow(params.lambda / params.kappa0, e);
    if (a >= 1.0) {
      a = 1.0;
      t.note = "lambda >= kappa(1): every vertex is slow";
    }
    t.a_sl = a;
    t.all_quick = false;
  } else {
    t.a_sl = 0.0;
    t.all_quick = true;
    if (params.lambda > params.kappa0)
      t.note = "eta >= 0 with lambda > kappa0 is outside the upper-bound "
               "theory (it assumes lambda <= kappa0); treating all vertices "
               "as quick";
  }

  // a_str: mean_degree is strictly decreasing, diverges at 0+
  const double thr = 1.0 / (10.0 * params.lambda * params.lambda);
  if (mean_degree(params, 1.0) > thr) {
    t.a_str = 1.0;  // all vertices strong
  } else {
    double lo = 1e-30, hi = 1.0;  // mean_degree(lo) > thr always holds here
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);  // bisect in log space
      if (mean_degree(params, mid) > thr)
        lo = mid;
      else
        hi = mid;
    }
    t.a_str = std::sqrt(lo * hi);
  }

  // with no slow vertices the strong-slow class is empty
  t.a_ssl = t.all_quick ? 0.0 : std::min(t.a_str, t.a_sl);
  return t;
}

condp_witness validate_condp(const kernel_spec& kernel) {
  kernel.validate();
  const double g = kernel.gamma;
  condp_witness w;
  w.c1 = kernel.beta;
  const double margin = 1.10;
  if (kernel.kind == kernel_kind::factor)
    w.c2 = margin * kernel.beta / (1.0 - g);
  else
    w.c2 = margin * kernel.beta * (1.0 / (1.0 - g) + 1.0 / g);

  model_params p;  // mean_degree needs a params shell
  p.n = 2;
  p.kernel = kernel;

  const int grid = 64;
  for (int i = 0; i < grid; ++i) {
    const double tfrac = static_cast<double>(i) / (grid - 1);
    const double a =
        std::exp(std::log(1e-6) + tfrac * (std::log(0.5) - std::log(1e-6)));
    const double pa1 = kernel_eval(kernel, a, 1.0);
    const double md = mean_degree(p, a);
    const double envelope = std::pow(a, -g);
    if (!(w.c1 * envelope <= pa1 * (1.0 + 1e-12)))
      throw std::logic_error("validate_condp: lower witness violated");
    if (!(pa1 <= md * (1.0 + 1e-12)))
      throw std::logic_error("validate_condp: p(a,1) > mean degree");
    if (!(md < w.c2 * envelope))
      throw std::logic_error("validate_condp: upper witness violated");
  }
  return w;
}

} // namespace evonet
