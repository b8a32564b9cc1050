#include "qproj/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qproj::specfun {

double hermite(unsigned n, double z) {
  if (n == 0) return 1.0;
  double hm1 = 1.0;
  double h = 2.0 * z;
  for (unsigned k = 1; k < n; ++k) {
    const double next = 2.0 * z * h - 2.0 * static_cast<double>(k) * hm1;
    hm1 = h;
    h = next;
    if (!std::isfinite(h)) {
      // Sign of the leading term decides the direction of overflow.
      const bool neg = (z < 0.0) && ((n % 2) == 1);
      return neg ? -std::numeric_limits<double>::infinity()
                 : std::numeric_limits<double>::infinity();
    }
  }
  return h;
}

double legendre(unsigned n, double z) {
  if (n == 0) return 1.0;
  double pm1 = 1.0;
  double p = z;
  for (unsigned k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double next = ((2.0 * kk + 1.0) * z * p - kk * pm1) / (kk + 1.0);
    pm1 = p;
    p = next;
  }
  return p;
}

double legendre_shifted(unsigned n, double x, double sqrt_alpha) {
  if (!(sqrt_alpha > 0.0)) throw std::domain_error("legendre_shifted: sqrt_alpha must be positive");
  const double tol = 1e-12 * sqrt_alpha;
  if (x < -sqrt_alpha - tol || x > tol)
    throw std::domain_error("legendre_shifted: x outside [-sqrt_alpha, 0]");
  return legendre(n, 1.0 + 2.0 * x / sqrt_alpha);
}

double log_gamma_half(int twice_arg) {
  if (twice_arg < 1) throw std::domain_error("log_gamma_half: argument must be positive");
  return std::lgamma(0.5 * static_cast<double>(twice_arg));
}

double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0);
  }
  return std::sin(u) / u;
}

CompensatedSum compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  double max_partial = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
    max_partial = std::max(max_partial, std::abs(sum + comp));
    max_partial = std::max(max_partial, std::abs(t));
  }
  CompensatedSum out;
  out.value = sum + comp;
  if (out.value != 0.0)
    out.cancellation = std::max(1.0, max_partial / std::abs(out.value));
  else
    out.cancellation = max_partial > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return out;
}

void hermite_functions(unsigned nmax, double x, std::span<double> out) {
  if (out.size() < static_cast<std::size_t>(nmax) + 1)
    throw std::invalid_argument("hermite_functions: output span too small");
  out[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (nmax == 0) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (unsigned n = 1; n < nmax; ++n) {
    const double nn = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * x * out[n] - std::sqrt(nn / (nn + 1.0)) * out[n - 1];
  }
}

std::vector<double> hermite_functions(unsigned nmax, double x) {
  std::vector<double> v(static_cast<std::size_t>(nmax) + 1);
  hermite_functions(nmax, x, v);
  return v;
}

double hermite_function(unsigned n, double x) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  hermite_functions(n, x, v);
  return v[n];
}

}  // namespace qproj::specfun
