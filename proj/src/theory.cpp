#include "evonet/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace evonet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/* closed-bound comparisons with a 1e-12 band so that region edges belong to
 * both adjacent branches (values agree there; see exponent_closed_form) */
constexpr double kEdgeTol = 1e-12;
bool le_tol(double u, double v) { return u <= v + kEdgeTol; }
bool ge_tol(double u, double v) { return u + kEdgeTol >= v; }

bool near_line(double u, double v) {
  return std::abs(u - v) <= 1e-12 * std::max({1.0, std::abs(u), std::abs(v)});
}

double pos_ratio(double num, double den) { return den > kEdgeTol ? num / den : kNaN; }

} // namespace

/*============================================================================
 * regimes
 *==========================================================================*/

const char* to_string(regime_kind k) {
  switch (k) {
    case regime_kind::ultra_fast: return "UltraFast";
    case regime_kind::fast: return "Fast";
    case regime_kind::slow_metastable: return "SlowMetastable";
    case regime_kind::boundary: return "Boundary";
  }
  return "?";
}

regime classify_regime(kernel_kind kind, double tau, double eta) {
  if (!(tau > 2.0))
    throw std::domain_error("classify_regime: tau must exceed 2 (finite-mean degrees)");

  if (kind == kernel_kind::factor) {
    if (eta >= 0.5 && near_line(tau, 3.0))
      return {regime_kind::boundary, "tau = 3 (ultra-fast onset)"};
    if (near_line(eta, 0.5) && tau > 3.0)
      return {regime_kind::boundary, "eta = 1/2 (fast / ultra-fast crossover)"};
    if (eta <= 0.0 && near_line(tau, 4.0 - eta))
      return {regime_kind::boundary, "tau = 4 - eta (fast / slow crossover)"};
    if (eta >= 0.0 && eta <= 0.5 && near_line(tau, 4.0 - 2.0 * eta))
      return {regime_kind::boundary, "tau = 4 - 2 eta (fast / slow crossover)"};
    if (eta > 0.5 && tau > 3.0) return {regime_kind::ultra_fast, ""};
    if ((eta <= 0.0 && tau > 4.0 - eta) ||
        (eta >= 0.0 && eta <= 0.5 && tau > 4.0 - 2.0 * eta))
      return {regime_kind::fast, ""};
    return {regime_kind::slow_metastable, ""};
  }

  /* preferential attachment: no fast phase; everything below eta = 1/2 is slow */
  if (eta >= 0.5 && near_line(tau, 3.0))
    return {regime_kind::boundary, "tau = 3 (ultra-fast onset)"};
  if (near_line(eta, 0.5) && tau > 3.0)
    return {regime_kind::boundary, "eta = 1/2 (ultra-fast onset)"};
  if (eta > 0.5 && tau > 3.0) return {regime_kind::ultra_fast, ""};
  return {regime_kind::slow_metastable, ""};
}

/*============================================================================
 * metastable exponent, closed form
 *==========================================================================*/

double exponent_closed_form(kernel_kind kind, double tau, double eta,
                            std::string* branch_id) {
  const regime reg = classify_regime(kind, tau, eta);
  if (reg.kind != regime_kind::slow_metastable) {
    std::ostringstream msg;
    msg << "exponent_closed_form: (tau=" << tau << ", eta=" << eta
        << ") is not in the slow regime (" << to_string(reg.kind) << ")";
    throw std::domain_error(msg.str());
  }

  struct hit {
    const char* id;
    double value;
  };
  std::vector<hit> hits;

  if (kind == kernel_kind::factor) {
    if ((le_tol(eta, 0.0) && le_tol(tau, 2.5)) ||
        (ge_tol(eta, 0.0) && le_tol(eta, 0.5) && le_tol(tau, 2.5 + eta)) ||
        (ge_tol(eta, 0.5) && tau < 3.0))
      hits.push_back({"F1", 1.0 / (3.0 - tau)});
    if ((ge_tol(tau, 2.5) && le_tol(tau, 3.0) && le_tol(eta, 2.5 - tau)) ||
        (ge_tol(tau, 3.0) && le_tol(eta, 2.0 - tau)))
      hits.push_back({"F2", 2.0 * tau - 3.0});
    if (le_tol(eta, 0.0) && ge_tol(tau, 2.5 - eta) && le_tol(tau, 4.0 + 2.0 * eta))
      hits.push_back({"F3", (2.0 * tau - 2.0 - eta) / (4.0 - eta - tau)});
    if (ge_tol(eta, 0.0) && le_tol(eta, 0.5) && ge_tol(tau, 2.5 + eta) &&
        tau < 4.0 - 2.0 * eta)
      hits.push_back({"F4", (2.0 * tau - 2.0 - 2.0 * eta) / (4.0 - 2.0 * eta - tau)});
    if (le_tol(eta, 0.0) && ge_tol(tau, std::max(3.0, 4.0 + 2.0 * eta)) &&
        le_tol(tau, 4.0 + eta))
      hits.push_back({"F5", tau / (4.0 - tau)});
    if (le_tol(eta, 0.0) && ge_tol(tau, std::max(2.0 - eta, 4.0 + eta)) &&
        tau < 4.0 - eta)
      hits.push_back({"F6", (3.0 * tau - 4.0 - eta) / (4.0 - tau - eta)});
  } else {
    if (le_tol(eta, -0.5) ||
        (ge_tol(eta, -0.5) && le_tol(eta, 0.0) && le_tol(tau, 2.0 - eta)))
      hits.push_back({"P1", 2.0 * tau - 3.0});
    if (ge_tol(eta, -0.5) && le_tol(eta, 0.0) && ge_tol(tau, 2.0 - eta) &&
        le_tol(tau, 8.0 / 3.0 + eta / 3.0))
      hits.push_back({"P2", (3.0 * tau - 4.0 - eta) / (4.0 - eta - tau)});
    if (ge_tol(eta, -0.5) && le_tol(eta, 0.0) && ge_tol(tau, 8.0 / 3.0 + eta / 3.0))
      hits.push_back({"P3", (3.0 * tau - 5.0 - eta) / (1.0 - eta)});
    if (ge_tol(eta, 0.0) && le_tol(eta, 0.5) && ge_tol(tau, 2.0 + 2.0 * eta) &&
        le_tol(tau, 8.0 / 3.0 + 2.0 * eta / 3.0))
      hits.push_back({"P4", (3.0 * tau - 4.0 - 2.0 * eta) / (4.0 - 2.0 * eta - tau)});
    if (ge_tol(eta, 0.0) && le_tol(eta, 0.5) &&
        ge_tol(tau, 8.0 / 3.0 + 2.0 * eta / 3.0) && eta < 0.5)
      hits.push_back({"P5", (3.0 * tau - 5.0 - 2.0 * eta) / (1.0 - 2.0 * eta)});
    if (tau < 3.0 && ge_tol(eta, 0.5 * tau - 1.0))
      hits.push_back({"P6", (tau - 1.0) / (3.0 - tau)});
  }

  if (hits.empty()) {
    std::ostringstream msg;
    msg << "exponent_closed_form: no branch covers tau=" << tau << ", eta=" << eta
        << " inside the slow regime (coverage bug)";
    throw std::logic_error(msg.str());
  }
  for (std::size_t i = 1; i < hits.size(); ++i) {
    if (std::abs(hits[i].value - hits[0].value) >
        1e-9 * std::max(1.0, std::abs(hits[0].value))) {
      std::ostringstream msg;
      msg << "exponent_closed_form: branches " << hits[0].id << "=" << hits[0].value
          << " and " << hits[i].id << "=" << hits[i].value << " disagree at tau="
          << tau << ", eta=" << eta;
      throw std::logic_error(msg.str());
    }
  }
  if (branch_id) *branch_id = hits[0].id;
  return hits[0].value;
}

/*============================================================================
 * survival strategies
 *==========================================================================*/

const char* to_string(strategy s) {
  switch (s) {
    case strategy::quick_direct: return "QuickDirect";
    case strategy::quick_indirect: return "QuickIndirect";
    case strategy::local_survival: return "LocalSurvival";
    case strategy::delayed_direct: return "DelayedDirect";
    case strategy::delayed_depleted_direct: return "DelayedDepletedDirect";
    case strategy::delayed_indirect: return "DelayedIndirect";
  }
  return "?";
}

namespace {

struct raw_region {
  bool feasible = false;
  double a_exp = kNaN;      // a = lambda^{a_exp}
  const char* region = "";
};

/* Feasibility region and a(lambda) exponent of one strategy.  The density
 * exponent of every row is 1 + (1-gamma) * a_exp (the bound is always of the
 * form  lambda * a^{1-gamma}), which the tests cross-check against the
 * closed-form branches over the whole slow region. */
raw_region strategy_region(strategy st, kernel_kind kind, double gamma, double eta) {
  const double tau = tau_from_gamma(gamma);
  const bool factor = (kind == kernel_kind::factor);
  raw_region r;

  switch (st) {
    case strategy::quick_direct:
      if (!factor) {
        r.region = "never (needs lambda bounded away from 0)";
        return r;
      }
      r.region = "tau < 3";
      r.feasible = tau < 3.0;
      r.a_exp = pos_ratio(1.0, 2.0 * gamma - 1.0);
      return r;

    case strategy::quick_indirect:
      r.region = "tau < 3";
      r.feasible = tau < 3.0;
      r.a_exp = pos_ratio(2.0, 2.0 * gamma - 1.0);
      return r;

    case strategy::local_survival:
      r.a_exp = 2.0 / gamma;
      if (factor) {
        r.region = "eta <= 0 and tau <= max(min(3, 5/2 - eta), 2 - eta)";
        r.feasible = le_tol(eta, 0.0) &&
                     le_tol(tau, std::max(std::min(3.0, 2.5 - eta), 2.0 - eta));
      } else {
        r.region = "eta <= -1/2, or eta <= 0 and tau <= 2 - eta";
        r.feasible =
            le_tol(eta, -0.5) || (le_tol(eta, 0.0) && le_tol(tau, 2.0 - eta));
      }
      return r;

    case strategy::delayed_direct:
      if (factor) {
        r.region =
            "eta <= 0 and 5/2 - eta <= tau <= 4 + 2 eta, or "
            "0 < eta < 1/2 and 5/2 + eta <= tau < 4 - 2 eta";
        if (le_tol(eta, 0.0)) {
          r.feasible = ge_tol(tau, 2.5 - eta) && le_tol(tau, 4.0 + 2.0 * eta);
          r.a_exp = pos_ratio(3.0, 3.0 * gamma - 1.0 - gamma * eta);
        } else if (eta < 0.5) {
          r.feasible = ge_tol(tau, 2.5 + eta) && tau < 4.0 - 2.0 * eta;
          r.a_exp = pos_ratio(3.0, 3.0 * gamma - 1.0 - 2.0 * gamma * eta);
        }
      } else {
        r.region = "-1/2 <= eta < 1/2 (any tau)";
        if (ge_tol(eta, -0.5) && le_tol(eta, 0.0)) {
          r.feasible = true;
          r.a_exp = pos_ratio(3.0, gamma * (1.0 - eta));
        } else if (eta > 0.0 && eta < 0.5) {
          r.feasible = true;
          r.a_exp = pos_ratio(3.0, gamma * (1.0 - 2.0 * eta));
        }
      }
      return r;

    case strategy::delayed_depleted_direct:
      if (!factor) {
        r.region = "never (depletion gains nothing here)";
        return r;
      }
      r.region = "eta <= 0 and max(3, 4 + 2 eta) <= tau < 4";
      r.feasible = le_tol(eta, 0.0) &&
                   ge_tol(tau, std::max(3.0, 4.0 + 2.0 * eta)) && tau < 4.0;
      r.a_exp = pos_ratio(2.0, 3.0 * gamma - 1.0);
      return r;

    case strategy::delayed_indirect:
      r.region =
          "eta <= 0 and 2 - eta <= tau < 4 - eta, or "
          "0 < eta < 1/2 and 2 + 2 eta <= tau < 4 - 2 eta";
      if (le_tol(eta, 0.0)) {
        r.feasible = ge_tol(tau, 2.0 - eta) && tau < 4.0 - eta;
        r.a_exp = pos_ratio(4.0, 3.0 * gamma - 1.0 - gamma * eta);
      } else if (eta < 0.5) {
        r.feasible = ge_tol(tau, 2.0 + 2.0 * eta) && tau < 4.0 - 2.0 * eta;
        r.a_exp = pos_ratio(4.0, 3.0 * gamma - 1.0 - 2.0 * gamma * eta);
      }
      return r;
  }
  return r;
}

const char* binding_string(strategy st) {
  switch (st) {
    case strategy::quick_direct:
      return "lambda * a * p(a,a) > M (quick direct spreading)";
    case strategy::quick_indirect:
      return "lambda^2 * a * p(a,1)^2 > M (quick indirect spreading)";
    case strategy::local_survival:
      return "lambda^2 * p(a,1) > M (local survival at the largest stars)";
    case strategy::delayed_direct:
      return "min(kappa(a), lambda) * a * p(a,a) * T_loc(a) > M (delayed direct spreading)";
    case strategy::delayed_depleted_direct:
      return "kappa(a) * a * p(a,a) * T_loc(a) > M (delayed depleted direct spreading)";
    case strategy::delayed_indirect:
      return "lambda^2 * a * p(a,1)^2 * T_loc(a) > M (delayed indirect spreading)";
  }
  return "?";
}

} // namespace

std::vector<strategy_row> strategy_table(kernel_kind kind, double tau, double eta) {
  if (!(tau > 2.0)) throw std::domain_error("strategy_table: tau must exceed 2");
  const double gamma = gamma_from_tau(tau);
  std::vector<strategy_row> rows;
  rows.reserve(all_strategies.size());
  for (strategy st : all_strategies) {
    if (kind == kernel_kind::pref_attach && st == strategy::quick_direct)
      continue;  // no such row: the mechanism needs lambda of order one
    raw_region rr = strategy_region(st, kind, gamma, eta);
    strategy_row row;
    row.strat = st;
    row.feasible = rr.feasible;
    row.a_exponent = rr.a_exp;
    row.exponent = 1.0 + (1.0 - gamma) * rr.a_exp;  // NaN propagates
    row.region = rr.region;
    rows.push_back(std::move(row));
  }
  return rows;
}

dominating_result exponent_via_strategies(kernel_kind kind, double tau, double eta) {
  const regime reg = classify_regime(kind, tau, eta);
  if (reg.kind != regime_kind::slow_metastable) {
    std::ostringstream msg;
    msg << "exponent_via_strategies: (tau=" << tau << ", eta=" << eta
        << ") is not in the slow regime (" << to_string(reg.kind) << ")";
    throw std::domain_error(msg.str());
  }
  double best = std::numeric_limits<double>::infinity();
  strategy pick = strategy::quick_direct;
  bool found = false;
  for (const strategy_row& row : strategy_table(kind, tau, eta)) {
    if (!row.feasible || !std::isfinite(row.exponent)) continue;
    if (row.exponent < best - 1e-12) {  // keep the first row attaining the min
      best = row.exponent;
      pick = row.strat;
      found = true;
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << "exponent_via_strategies: no feasible strategy at tau=" << tau
        << ", eta=" << eta << " inside the slow regime (coverage bug)";
    throw std::logic_error(msg.str());
  }
  return {best, pick};
}

theory_report analyze(kernel_kind kind, double tau, double eta) {
  theory_report rep;
  rep.kind = kind;
  rep.tau = tau;
  rep.eta = eta;
  rep.reg = classify_regime(kind, tau, eta);
  rep.xi = kNaN;
  rep.dominating = strategy::quick_direct;
  rep.a_exponent = kNaN;
  rep.table = strategy_table(kind, tau, eta);
  if (rep.reg.kind == regime_kind::slow_metastable) {
    rep.xi = exponent_closed_form(kind, tau, eta, &rep.xi_branch);
    const dominating_result dom = exponent_via_strategies(kind, tau, eta);
    if (std::abs(dom.xi - rep.xi) > 1e-9 * std::max(1.0, std::abs(rep.xi))) {
      std::ostringstream msg;
      msg << "analyze: strategy minimum " << dom.xi << " disagrees with closed form "
          << rep.xi << " at tau=" << tau << ", eta=" << eta;
      throw std::logic_error(msg.str());
    }
    rep.dominating = dom.strat;
    for (const strategy_row& row : rep.table)
      if (row.strat == dom.strat) rep.a_exponent = row.a_exponent;
  }
  return rep;
}

/*============================================================================
 * optimal star threshold
 *==========================================================================*/

optimal_a_result optimal_a(strategy st, kernel_kind kind, double gamma, double eta,
                           double lambda, double scale_c, double cond_c) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("optimal_a: gamma must lie in (0,1)");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("optimal_a: lambda must lie in (0,1)");
  if (!(scale_c > 0.0)) throw std::domain_error("optimal_a: C must be positive");
  if (!(cond_c > 0.0)) throw std::domain_error("optimal_a: cond_c must be positive");

  const raw_region rr = strategy_region(st, kind, gamma, eta);
  if (!rr.feasible || !std::isfinite(rr.a_exp) || !(rr.a_exp > 0.0)) {
    std::ostringstream msg;
    msg << "optimal_a: " << to_string(st) << " is infeasible at gamma=" << gamma
        << " (tau=" << tau_from_gamma(gamma) << "), eta=" << eta
        << "; feasible region: " << rr.region;
    throw std::domain_error(msg.str());
  }

  optimal_a_result out;
  out.exponent = rr.a_exp;
  out.a = scale_c * std::pow(lambda, rr.a_exp);
  if (!(out.a > 0.0 && out.a < 1.0))
    throw std::domain_error(
        "optimal_a: C * lambda^e falls outside (0,1); adjust the constant");
  out.binding = binding_string(st);

  /* technical side conditions, evaluated at beta = 1 where p(a,1) = a^-gamma
   * for both kernels */
  const double p_a1 = std::pow(out.a, -gamma);
  out.cond_i = p_a1 <= std::exp(1.0 / lambda);
  out.cond_ii = lambda * lambda * p_a1 > -cond_c * std::log(out.a * lambda);
  return out;
}

/*============================================================================
 * master inequalities
 *==========================================================================*/

const char* to_string(mi_variant v) {
  switch (v) {
    case mi_variant::imi_quick: return "IMI_quick";
    case mi_variant::imi_slow: return "IMI_slow";
    case mi_variant::omi_weak: return "OMI_weak";
    case mi_variant::omi_strong_quick: return "OMI_strong_quick";
    case mi_variant::omi_strong_slow: return "OMI_strong_slow";
    case mi_variant::da_factor: return "Da_factor";
  }
  return "?";
}

mi_variant mi_variant_from_string(const std::string& name) {
  for (mi_variant v : {mi_variant::imi_quick, mi_variant::imi_slow,
                       mi_variant::omi_weak, mi_variant::omi_strong_quick,
                       mi_variant::omi_strong_slow, mi_variant::da_factor})
    if (name == to_string(v)) return v;
  throw std::invalid_argument(
      "unknown inequality variant '" + name +
      "' (expected IMI_quick, IMI_slow, OMI_weak, OMI_strong_quick, "
      "OMI_strong_slow or Da_factor)");
}

namespace {

/*----------------------------------------------------------------------------
 * Exact integration of piecewise-power integrands.
 *
 * Every y-integrand appearing in the master inequalities is a product of
 * power laws between consecutive breakpoints (kernel powers, the tabulated
 * score's log-log-linear segments, kappa(x) v kappa(y) switching at y = x,
 * s(y v a) switching at y = a).  On such a segment the integral has the
 * closed form below, so there is no quadrature error to tune — the computed
 * left sides are exact for the tabulated score.
 *--------------------------------------------------------------------------*/

double power_segment(double y0, double y1, double g0, double g1) {
  if (y1 - y0 <= y0 * 1e-14) return 0.0;
  if (g0 <= 0.0 && g1 <= 0.0) return 0.0;  // integrand vanishes on the segment
  if (g0 <= 0.0 || g1 <= 0.0)
    throw numeric_error("piecewise-power integral: sign change inside a segment");
  const double lr = std::log(y1 / y0);
  const double qp1 = std::log(g1 / g0) / lr + 1.0;  // power + 1
  const double shape = (qp1 == 0.0) ? lr : std::expm1(qp1 * lr) / qp1;
  return g0 * y0 * shape;
}

/* head segment (0, y1]: the power is read off from a sample at y1/2; an
 * exponent <= -1 means the integral diverges and the check cannot proceed */
double power_head(double y1, double g_half, double g1, const char* ctx) {
  if (g_half <= 0.0 && g1 <= 0.0) return 0.0;
  if (g_half <= 0.0 || g1 <= 0.0)
    throw numeric_error("piecewise-power integral: sign change near 0");
  const double q = std::log(g1 / g_half) / std::log(2.0);
  if (q <= -1.0 + 1e-9) {
    std::ostringstream msg;
    msg << ctx << ": integrand ~ y^" << q << " is not integrable at 0";
    throw numeric_error(msg.str());
  }
  return g1 * y1 / (q + 1.0);
}

double integrate_piecewise_power(const std::function<double(double)>& f, double lo,
                                 double hi, const std::vector<double>& cuts,
                                 const char* ctx) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> pts;
  pts.reserve(cuts.size() + 2);
  pts.push_back(lo);
  for (double c : cuts)
    if (c > lo && c < hi) pts.push_back(c);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());

  double total = 0.0;
  std::size_t i0 = 0;
  if (lo <= 0.0) {
    total += power_head(pts[1], f(0.5 * pts[1]), f(pts[1]), ctx);
    i0 = 1;
  }
  double y_prev = pts[i0];
  double g_prev = f(y_prev);
  for (std::size_t k = i0 + 1; k < pts.size(); ++k) {
    if (pts[k] - y_prev <= y_prev * 1e-14) continue;
    const double g_next = f(pts[k]);
    total += power_segment(y_prev, pts[k], g_prev, g_next);
    y_prev = pts[k];
    g_prev = g_next;
  }
  return total;
}

/* integral_0^1 lambda p(x,y) s(y v a) dy */
double quick_lhs_integral(const model_params& mp, const quad::score_table& s,
                          double x, double a) {
  if (mp.lambda == 0.0) return 0.0;
  std::vector<double> cuts = s.x;
  cuts.push_back(a);
  cuts.push_back(x);  // pref-attach kernel kinks at y = x
  auto f = [&](double y) {
    return mp.lambda * kernel_eval(mp.kernel, x, y) * s(std::max(y, a));
  };
  return integrate_piecewise_power(f, 0.0, 1.0, cuts, "master inequality");
}

/* integral_0^cut (kappa(x) v kappa(y)) p(x,y) s(y v a) dy
 *   + integral_cut^1 lambda p(x,y) s(y) dy */
double slow_lhs_integral(const model_params& mp, const quad::score_table& s,
                         double x, double a, double cut) {
  const double kx = update_rate_x(mp, x);
  std::vector<double> cuts = s.x;
  cuts.push_back(a);
  cuts.push_back(x);  // kappa(x) v kappa(y) switches at y = x; kernel kink too
  auto f_slow = [&](double y) {
    return std::max(kx, update_rate_x(mp, y)) * kernel_eval(mp.kernel, x, y) *
           s(std::max(y, a));
  };
  double total =
      integrate_piecewise_power(f_slow, 0.0, cut, cuts, "master inequality (slow part)");
  if (mp.lambda > 0.0) {
    auto f_quick = [&](double y) {
      return mp.lambda * kernel_eval(mp.kernel, x, y) * s(y);
    };
    total += integrate_piecewise_power(f_quick, cut, 1.0, cuts,
                                       "master inequality (quick part)");
  }
  return total;
}

} // namespace

mi_report check_master_inequality(mi_variant v, const model_params& params,
                                  double a, const quad::score_table& s,
                                  double constant) {
  params.kernel.validate();
  if (!(a >= 0.0 && a < 1.0))
    throw std::domain_error("check_master_inequality: a must lie in [0,1)");
  if (!(constant > 0.0))
    throw std::domain_error("check_master_inequality: constant must be positive");
  if (!(params.lambda >= 0.0) || !(params.kappa0 >= 0.0))
    throw std::domain_error("check_master_inequality: negative rate");
  s.validate_nonincreasing();

  /* D_a is not a ratio: it is the left side itself, with the constant 8 baked
   * into its definition (the `constant` argument plays no role here) */
  if (v == mi_variant::da_factor) {
    if (params.kernel.kind != kernel_kind::factor)
      throw std::domain_error("Da_factor: defined for the factor kernel only");
    if (params.lambda == 0.0) return {0.0, true, a};
    const double g = params.kernel.gamma;
    std::vector<double> cuts = s.x;
    cuts.push_back(a);
    auto f = [&](double y) { return std::pow(y, -g) * s(std::max(y, a)); };
    const double integral = integrate_piecewise_power(f, 0.0, 1.0, cuts, "Da_factor");
    const double d = 8.0 * params.lambda * params.kernel.beta * integral;
    return {d, d <= 1.0 + 1e-12, a};
  }

  if (params.lambda == 0.0) return {0.0, true, a};  // every left side vanishes

  const threshold_set th = thresholds(params);
  double lo = 0.0;
  double hi = 1.0;
  switch (v) {
    case mi_variant::imi_quick:
      lo = std::max(a, th.all_quick ? 0.0 : th.a_sl);
      if (lo <= 0.0) lo = 1e-6;  // class reaches every small rank; documented floor
      hi = 1.0;
      break;
    case mi_variant::imi_slow:
      if (th.all_quick)
        throw std::domain_error(
            "IMI_slow: no slow vertices at these parameters (eta >= 0)");
      hi = th.a_sl;
      lo = std::max(a, hi * 1e-3);  // three decades into the slow class
      break;
    case mi_variant::omi_weak:
      lo = th.a_str;
      hi = 1.0;
      break;
    case mi_variant::omi_strong_quick:
      hi = th.a_str;
      lo = th.a_ssl > 0.0 ? th.a_ssl : hi * 1e-3;
      break;
    case mi_variant::omi_strong_slow:
      hi = th.a_ssl;
      lo = hi * 1e-3;
      break;
    default:
      break;  // da_factor handled above
  }
  if (!(hi > 0.0) || hi < lo) return {0.0, true, lo};  // empty class: vacuous

  const std::size_t n_grid = std::max<std::size_t>(512, s.size());
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  double max_ratio = 0.0;
  double worst = lo;
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_grid - 1);
    const double x = std::exp(log_lo + t * (log_hi - log_lo));
    double lhs = 0.0;
    switch (v) {
      case mi_variant::imi_quick:
      case mi_variant::omi_strong_quick:
        lhs = constant * t_loc_upper(params, x) * quick_lhs_integral(params, s, x, a);
        break;
      case mi_variant::omi_weak:
        lhs = constant * quick_lhs_integral(params, s, x, a);
        break;
      case mi_variant::imi_slow:
        lhs = constant * t_loc_upper(params, x) *
              slow_lhs_integral(params, s, x, a, th.a_sl);
        break;
      case mi_variant::omi_strong_slow:
        lhs = constant * t_loc_upper(params, x) *
              slow_lhs_integral(params, s, x, a, th.a_ssl);
        break;
      default:
        break;
    }
    const double ratio = lhs / s(x);
    if (ratio > max_ratio) {
      max_ratio = ratio;
      worst = x;
    }
  }
  return {max_ratio, max_ratio <= 1.0 + 1e-12, worst};
}

double upper_density_bound(const model_params& params, double a,
                           const quad::score_table& s) {
  params.kernel.validate();
  if (!(a > 0.0 && a <= 1.0))
    throw std::domain_error("upper_density_bound: a must lie in (0,1]");
  s.validate_nonincreasing();
  if (a >= 1.0) return 1.0;
  const double integral = integrate_piecewise_power(
      [&](double y) { return s(y); }, a, 1.0, s.x, "upper_density_bound");
  return a + 7.0 / (6.0 * s(a)) * integral;
}

quad::score_table tloc_power_score(const model_params& params, double lo,
                                   std::size_t points) {
  params.kernel.validate();
  if (!(lo > 0.0 && lo < 1.0))
    throw std::domain_error("tloc_power_score: lo must lie in (0,1)");
  if (points < 2) throw std::domain_error("tloc_power_score: need >= 2 points");
  const double g = params.kernel.gamma;
  quad::score_table table = quad::tabulate_score(
      [&](double x) { return t_loc_upper(params, x) * std::pow(x, -g); }, lo, 1.0,
      points);
  table.validate_nonincreasing();
  return table;
}

} // namespace evonet
