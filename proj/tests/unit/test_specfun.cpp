#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qproj/specfun.hpp"

using namespace qproj::specfun;

TEST_CASE("hermite matches explicit low-order polynomials") {
  for (double z : {-2.3, -0.7, 0.0, 0.4, 1.9}) {
    CHECK(hermite(0, z) == doctest::Approx(1.0));
    CHECK(hermite(1, z) == doctest::Approx(2 * z));
    CHECK(hermite(2, z) == doctest::Approx(4 * z * z - 2));
    CHECK(hermite(3, z) == doctest::Approx(8 * z * z * z - 12 * z));
    CHECK(hermite(4, z) == doctest::Approx(16 * std::pow(z, 4) - 48 * z * z + 12));
  }
}

TEST_CASE("hermite overflow gives infinity, not NaN") {
  const double h = hermite(400, 1e6);
  CHECK(std::isinf(h));
  CHECK_FALSE(std::isnan(h));
}

TEST_CASE("legendre matches explicit polynomials") {
  for (double z : {-1.0, -0.3, 0.0, 0.55, 1.0}) {
    CHECK(legendre(0, z) == doctest::Approx(1.0));
    CHECK(legendre(2, z) == doctest::Approx(0.5 * (3 * z * z - 1)));
    CHECK(legendre(3, z) == doctest::Approx(0.5 * (5 * z * z * z - 3 * z)));
  }
  CHECK(legendre(37, 1.0) == doctest::Approx(1.0));
  CHECK(legendre(37, -1.0) == doctest::Approx(-1.0));
}

TEST_CASE("shifted legendre maps the interval endpoints and rejects outside points") {
  const double s = std::sqrt(3.0);
  CHECK(legendre_shifted(5, 0.0, s) == doctest::Approx(1.0));
  CHECK(legendre_shifted(5, -s, s) == doctest::Approx(-1.0));
  CHECK(legendre_shifted(2, -s / 2, s) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(legendre_shifted(2, 0.1, s), std::domain_error);
  CHECK_THROWS_AS(legendre_shifted(2, -s - 0.1, s), std::domain_error);
}

TEST_CASE("log_gamma_half against lgamma") {
  for (int t = 1; t < 300; ++t) CHECK(log_gamma_half(t) == doctest::Approx(std::lgamma(0.5 * t)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma_half(0), std::domain_error);
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-9) == doctest::Approx(1.0));
  CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0));
}

TEST_CASE("compensated sum recovers cancelled terms and reports the cancellation") {
  const std::vector<double> t{1e16, 1.0, -1e16};
  const auto s = compensated_sum(t);
  CHECK(s.value == 1.0);
  CHECK(s.cancellation >= 1e15);
  const std::vector<double> pos{1.0, 2.0, 3.0};
  CHECK(compensated_sum(pos).cancellation == doctest::Approx(1.0));
  const std::vector<double> zero{1.0, -1.0};
  CHECK(std::isinf(compensated_sum(zero).cancellation));
}

TEST_CASE("hermite functions agree with a long-double oracle") {
  for (unsigned n : {0u, 1u, 2u, 7u, 20u, 45u})
    for (double x : {-6.0, -1.3, 0.0, 0.77, 3.5, 8.0}) {
      const double ref = oracle::hermite_function(n, x);
      CHECK(hermite_function(n, x) == doctest::Approx(ref).epsilon(1e-11).scale(1e-300));
    }
  std::vector<double> all(31);
  hermite_functions(30, 1.234, all);
  for (unsigned n = 0; n <= 30; ++n) CHECK(all[n] == doctest::Approx(oracle::hermite_function(n, 1.234)).epsilon(1e-11));
}

TEST_CASE("hermite functions are orthonormal") {
  for (unsigned n = 0; n <= 12; n += 3)
    for (unsigned m = 0; m <= 12; m += 4) {
      const double ip = oracle::simpson([&](double x) { return hermite_function(n, x) * hermite_function(m, x); },
                                        -15.0, 15.0, 20000);
      CHECK(ip == doctest::Approx(n == m ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("hermite functions stay finite far out and match the closed form at the origin") {
  std::vector<double> v(1001);
  hermite_functions(1000, 60.0, v);
  for (double x : v) CHECK(std::isfinite(x));
  hermite_functions(1000, 0.0, v);
  for (unsigned k : {0u, 3u, 50u, 250u, 500u}) {
    // psi_2k(0) = (-1)^k pi^{-1/4} sqrt((2k)!) / (2^k k!)
    const double log_abs = -0.25 * std::log(std::numbers::pi) + 0.5 * std::lgamma(2.0 * k + 1.0) -
                           k * std::log(2.0) - std::lgamma(k + 1.0);
    const double ref = (k % 2 ? -1.0 : 1.0) * std::exp(log_abs);
    CHECK(v[2 * k] == doctest::Approx(ref).epsilon(1e-10));
    if (2 * k + 1 <= 1000) CHECK(std::abs(v[2 * k + 1]) < 1e-15);
  }
}
