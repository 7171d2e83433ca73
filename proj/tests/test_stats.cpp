#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "emanet/errors.hpp"
#include "emanet/stats.hpp"
#include "oracles.hpp"

using namespace emanet;

TEST_CASE("pearson_r on identical, mirrored and mixed sequences") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  CHECK(stats::pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(stats::pearson_r(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));

  const std::vector<double> y{2, 1, 4, 3, 6};
  // Frozen from the two-pass oracle: 10 / sqrt(148).
  const double expected = 0.8219949365267865;
  CHECK(std::abs(oracle::pearson(x, y) - expected) < 1e-15);
  CHECK(std::abs(stats::pearson_r(x, y) - expected) < 1e-12);
}

TEST_CASE("pearson_r edge cases") {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> flat{2, 2, 2};
  CHECK(stats::pearson_r(x, flat) == 0.0);
  CHECK_THROWS_AS(stats::pearson_r(x, std::vector<double>{1, 2}), LengthMismatch);
  CHECK_THROWS_AS(stats::pearson_r(std::vector<double>{1}, std::vector<double>{1}), InsufficientData);
}

TEST_CASE("pearson_r affine invariance") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(12), y(12), xs(12), xn(12);
    for (int i = 0; i < 12; ++i) {
      x[i] = n01(gen);
      y[i] = n01(gen);
    }
    const double a = 0.5 + std::abs(n01(gen)), b = n01(gen) * 10;
    for (int i = 0; i < 12; ++i) {
      xs[i] = a * x[i] + b;
      xn[i] = -a * x[i] + b;
    }
    const double r = stats::pearson_r(x, y);
    CHECK(stats::pearson_r(xs, y) == doctest::Approx(r).epsilon(1e-12));
    CHECK(stats::pearson_r(xn, y) == doctest::Approx(-r).epsilon(1e-12));
  }
}

TEST_CASE("t_sf reference values") {
  CHECK(stats::t_sf(0.0, 1).value == 1.0);
  CHECK(stats::t_sf(0.0, 500).value == 1.0);

  // Normal limit: 2 * (1 - Phi(1.96)) = 0.04999579...
  CHECK(std::abs(stats::t_sf(1.96, 10000).value - 0.0500) <= 0.0003);

  // t = 2, df = 10 against quadrature of the t density.
  const double quad = oracle::t_two_sided_quadrature(2.0, 10);
  CHECK(std::abs(quad - 0.07338803477074039) < 1e-9);
  CHECK(std::abs(stats::t_sf(2.0, 10).value - quad) < 1e-8);

  CHECK(stats::t_sf(INFINITY, 5).value == 0.0);
}

TEST_CASE("t_sf matches quadrature across the accuracy envelope") {
  const double dfs[] = {1, 2, 3, 5, 10, 30, 100, 1000, 10000};
  const double ts[] = {0.01, 0.3, 1.0, 1.5, 2.5, 4.0, 7.0, 12.0};
  for (double df : dfs) {
    for (double t : ts) {
      const double p = stats::t_sf(t, df).value;
      const double q = oracle::t_two_sided_quadrature(t, df);
      INFO("df=" << df << " t=" << t << " p=" << p << " quad=" << q);
      CHECK(std::abs(p - q) <= 1e-10 * std::max(q, 1e-300) + 1e-15);
    }
  }
}

TEST_CASE("t_sf symmetry and monotonicity") {
  for (double df : {1.0, 4.0, 24.0, 1999.0}) {
    double prev = 1.0;
    for (double t = 0.0; t <= 40.0; t += 0.25) {
      const double p = stats::t_sf(t, df).value;
      CHECK(p == stats::t_sf(-t, df).value);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(p <= prev);
      prev = p;
    }
  }
}

TEST_CASE("incomplete beta boundaries and reflection") {
  CHECK(stats::incomplete_beta(0.0, 2, 3) == 0.0);
  CHECK(stats::incomplete_beta(1.0, 2, 3) == 1.0);
  // I_x(1, 1) = x; I_x(a, b) = 1 - I_{1-x}(b, a).
  CHECK(stats::incomplete_beta(0.37, 1, 1) == doctest::Approx(0.37).epsilon(1e-14));
  CHECK(stats::incomplete_beta(0.3, 2.5, 7) ==
        doctest::Approx(1 - stats::incomplete_beta(0.7, 7, 2.5)).epsilon(1e-13));
}

TEST_CASE("mean and std on a large offset with tiny spread") {
  // x_i = 1e9 + k_i * 2^-20 is exact in double, so std(x) == std(k * 2^-20)
  // mathematically and the deviations can be evaluated without cancellation.
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> k(-50, 50);
  const std::size_t n = 1'000'000;
  std::vector<double> x(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = k(gen) * std::ldexp(1.0, -20);
    x[i] = 1e9 + d[i];
  }
  long double dsum = 0;
  for (double v : d) dsum += v;
  const long double dmean = dsum / n;
  long double ss = 0;
  for (double v : d) ss += (v - dmean) * (v - dmean);
  const double oracle_std = static_cast<double>(std::sqrt(ss / (n - 1)));
  const double oracle_mean = static_cast<double>(1e9L + dmean);

  CHECK(std::abs(stats::mean(x) - oracle_mean) <= 1e-12 * oracle_mean);
  CHECK(std::abs(stats::sample_std(x) - oracle_std) <= 1e-12 * oracle_std);
  CHECK(std::abs(stats::sample_std(d) - oracle_std) <= 1e-12 * oracle_std);
}

TEST_CASE("compensated sum recovers small terms") {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(stats::sum(v) == 2.0);
  CHECK(stats::sample_std(std::vector<double>{4.0}) == 0.0);
  CHECK(stats::mean(std::vector<double>{}) == 0.0);
}
