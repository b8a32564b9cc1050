#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "qproj/grid.hpp"
#include "qproj/marginals.hpp"
#include "qproj/parallel.hpp"
#include "qproj/precision.hpp"

namespace qproj {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_default_threads(unsigned n) { g_threads.store(n); }

unsigned default_threads() {
  const unsigned n = g_threads.load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

Grid1D Grid1D::with_step(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("Grid1D: step must be positive");
  const auto intervals = static_cast<std::size_t>(std::llround((hi - lo) / step));
  return Grid1D(lo, lo + static_cast<double>(intervals) * step, intervals + 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) v[i] = at(i);
  return v;
}

double trapezoid(const std::vector<double>& values, double step) {
  if (values.empty()) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * step;
}

void MarginalPair::validate(double tol) const {
  if (mu.size() != x_grid.points || nu.size() != p_grid.points)
    throw std::invalid_argument("marginals: density length does not match its grid");
  for (double v : mu)
    if (!(v >= 0.0)) throw std::invalid_argument("marginals: negative or NaN position density");
  for (double v : nu)
    if (!(v >= 0.0)) throw std::invalid_argument("marginals: negative or NaN momentum density");
  const double zm = trapezoid(mu, x_grid.step());
  const double zn = trapezoid(nu, p_grid.step());
  if (std::abs(zm - 1.0) > tol)
    throw std::invalid_argument("marginals: position density integrates to " + std::to_string(zm));
  if (std::abs(zn - 1.0) > tol)
    throw std::invalid_argument("marginals: momentum density integrates to " + std::to_string(zn));
  if (!(M > 0.0) || !(dT > 0.0)) throw std::invalid_argument("marginals: M and dT must be positive");
}

Precision parse_precision(std::string_view s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw std::invalid_argument("unknown precision mode: " + std::string(s));
}

std::string_view to_string(Precision p) { return p == Precision::Double ? "double" : "extended"; }

}  // namespace qproj
