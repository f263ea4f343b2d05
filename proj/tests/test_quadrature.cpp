// adaptive quadrature against closed-form integrals, and the tabulated score
// machinery (log-log interpolation is exact on pure powers, which is what
// every later consumer relies on).
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evonet/quadrature.hpp"

using namespace evonet;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials and smooth integrands are exact") {
  auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  r = quad::integrate([](double x) { return std::sin(x); }, 0.0,
                      3.14159265358979323846);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  // error estimate is honest: true error below the reported bound
  r = quad::integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0);
  CHECK(r.converged);
  const double truth = 1.7724146965190425;  // erf(3)*sqrt(pi)
  CHECK(std::fabs(r.value - truth) <= std::max(r.abs_error, 1e-13));
}

TEST_CASE("a genuinely kinked integrand still meets the global budget") {
  // |x - 1/3| has an interior kink off every bisection point; panels near it
  // bottom out locally but the accumulated estimate converges globally
  auto r = quad::integrate([](double x) { return std::fabs(x - 1.0 / 3.0); },
                           0.0, 1.0, 1e-12);
  CHECK(r.converged);
  const double truth = (1.0 / 9.0 + 4.0 / 9.0) / 2.0;  // 5/18
  CHECK(r.value == doctest::Approx(truth).epsilon(1e-11));
}

TEST_CASE("integrable power singularities at zero") {
  // integral_0^1 y^{-g} dy = 1/(1-g), via the u-substitution entry point
  for (double g : {0.25, 0.5, 0.75, 0.9}) {
    auto r = quad::integrate_singular0(
        [g](double y) { return std::pow(y, -g); }, 1.0, g);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / (1.0 - g)).epsilon(1e-9));
  }
  // singular factor times a smooth one:
  // integral_0^1 y^{-1/2} e^{-y} dy = sqrt(pi) erf(1)
  auto r = quad::integrate_singular0(
      [](double y) { return std::pow(y, -0.5) * std::exp(-y); }, 1.0, 0.5);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.4936482656248540).epsilon(1e-9));
}

TEST_CASE("failure to converge is reported, not hidden") {
  // max_depth 0 leaves one panel; a tiny relative tolerance cannot be met
  auto r = quad::integrate([](double x) { return std::exp(x); }, 0.0, 8.0,
                           1e-15, 0.0, 0);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(quad::require(r, "test"), numeric_error);
}

TEST_CASE("score_table reproduces pure powers exactly") {
  auto t = quad::tabulate_score([](double x) { return std::pow(x, -0.5); },
                                1e-4, 1.0, 200);
  CHECK(t.x_min() == doctest::Approx(1e-4));
  CHECK(t.x_max() == doctest::Approx(1.0));
  t.validate_nonincreasing();
  // off-node queries: log-log linear interpolation is exact for x^q
  for (double x : {1.3e-4, 7.7e-4, 0.0123, 0.31, 0.999}) {
    CHECK(t(x) == doctest::Approx(std::pow(x, -0.5)).epsilon(1e-12));
  }
  // below the grid: head-slope extrapolation continues the same power
  CHECK(t(1e-6) == doctest::Approx(1e3).epsilon(1e-10));
  // above the grid: clamped at s(1)
  CHECK(t(2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("score_table validation rejects bad tables") {
  // increasing values
  quad::score_table bad;
  bad.x = {0.1, 0.5, 1.0};
  bad.s = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(bad.validate_nonincreasing(), std::invalid_argument);
  // values below 1
  quad::score_table low;
  low.x = {0.1, 0.5, 1.0};
  low.s = {0.9, 0.8, 0.5};
  CHECK_THROWS_AS(low.validate_nonincreasing(), std::invalid_argument);
  // a constant table of ones is fine
  quad::score_table ones;
  ones.x = {0.1, 0.5, 1.0};
  ones.s = {1.0, 1.0, 1.0};
  ones.validate_nonincreasing();
  CHECK(ones(0.3) == doctest::Approx(1.0));
}

TEST_CASE("tabulate_score pins the endpoints") {
  auto t = quad::tabulate_score([](double x) { return 2.0 - x; }, 0.01, 1.0,
                                64);
  CHECK(t.size() == 64);
  CHECK(t.s.front() == doctest::Approx(1.99));
  CHECK(t.s.back() == doctest::Approx(1.0));
  CHECK(t.x.front() == doctest::Approx(0.01));
  CHECK(t.x.back() == doctest::Approx(1.0));
}

} // TEST_SUITE
