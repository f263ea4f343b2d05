// small-sample statistics against hand-computed values and classical
// reference quantiles.
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evonet/stats.hpp"

using namespace evonet;

TEST_SUITE("stats") {

TEST_CASE("mean_stderr on a hand case") {
  auto s = stats::mean_stderr({1.0, 2.0, 3.0, 4.0});
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  // sample variance 5/3, stderr sqrt(5/12)
  CHECK(s.stderr_ == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-12));
  auto one = stats::mean_stderr({42.0});
  CHECK(one.mean == doctest::Approx(42.0));
  CHECK(one.stderr_ == 0.0);
  CHECK(stats::mean_stderr({}).n == 0);  // empty sample: zero summary
}

TEST_CASE("median for odd and even sizes") {
  CHECK(stats::median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(stats::median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
  CHECK(stats::median({7.0}) == doctest::Approx(7.0));
}

TEST_CASE("weighted least squares recovers an exact line") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y, w;
  for (double xi : x) {
    y.push_back(2.0 * xi + 1.0);
    w.push_back(1.0 + xi);  // arbitrary positive weights
  }
  auto f = stats::weighted_least_squares(x, y, w);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.points == 5);
  // residual-scaled error vanishes on a perfect fit
  auto g = stats::weighted_least_squares(x, y, w, true);
  CHECK(g.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("weighted least squares slope error matches the formula") {
  // unit weights, x = {0,1,2}: Sxx = 2, so slope_stderr = 1/sqrt(2)
  std::vector<double> x = {0.0, 1.0, 2.0};
  std::vector<double> y = {0.3, 0.9, 2.3};
  std::vector<double> w = {1.0, 1.0, 1.0};
  auto f = stats::weighted_least_squares(x, y, w);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.slope_stderr == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(
      stats::weighted_least_squares({0.0}, {1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      stats::weighted_least_squares(x, y, {1.0, -1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("regularized gamma and chi-square tails match references") {
  // P(1,x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 3.0}) {
    CHECK(stats::regularized_gamma_p(1.0, x) ==
          doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    CHECK(stats::regularized_gamma_q(1.0, x) ==
          doctest::Approx(std::exp(-x)).epsilon(1e-12));
  }
  // chi-square with 2 dof: sf(x) = e^{-x/2}
  CHECK(stats::chi_square_sf(3.0, 2.0) ==
        doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  // classical quantiles
  CHECK(stats::chi_square_sf(1.0, 1.0) ==
        doctest::Approx(0.31731050786291410).epsilon(1e-10));
  CHECK(stats::chi_square_sf(10.0, 5.0) ==
        doctest::Approx(0.075235246146512178).epsilon(1e-10));
  CHECK(stats::chi_square_sf(0.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("normal cdf reference points") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(stats::normal_cdf(1.96) ==
        doctest::Approx(0.97500210485177952).epsilon(1e-10));
  CHECK(stats::normal_cdf(-1.96) ==
        doctest::Approx(0.024997895148220484).epsilon(1e-8));
  CHECK(stats::normal_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ks statistic on a tiny hand case") {
  // two samples {0.25, 0.75} against the uniform CDF: D = 0.25
  auto id = [](double x) { return x; };
  CHECK(stats::ks_statistic({0.75, 0.25}, id) == doctest::Approx(0.25));
  // a sample equal to its own quantiles at midpoints has D = 1/(2n)
  std::vector<double> mid = {0.125, 0.375, 0.625, 0.875};
  CHECK(stats::ks_statistic(mid, id) == doctest::Approx(0.125));
}

TEST_CASE("ks p-value matches the Kolmogorov series") {
  // with the Stephens factor equal to one, p = 2 sum (-1)^{k-1} e^{-2k^2}
  const std::size_t n = 10000;
  const double sn = std::sqrt(double(n));
  const double d = 1.0 / (sn + 0.12 + 0.11 / sn);
  CHECK(stats::ks_pvalue(d, n) ==
        doctest::Approx(0.26999967167735266).epsilon(1e-8));
  // monotone in d
  CHECK(stats::ks_pvalue(0.001, n) > stats::ks_pvalue(0.02, n));
  CHECK(stats::ks_pvalue(1e-9, n) == doctest::Approx(1.0));
}

TEST_CASE("pearson chi-square statistic") {
  const double stat =
      stats::chi_square_stat({10.0, 20.0, 30.0}, {15.0, 15.0, 30.0});
  CHECK(stat == doctest::Approx(25.0 / 15.0 + 25.0 / 15.0).epsilon(1e-12));
  CHECK_THROWS_AS(stats::chi_square_stat({1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(stats::chi_square_stat({1.0, 2.0}, {1.0}),
                  std::invalid_argument);
}

} // TEST_SUITE
