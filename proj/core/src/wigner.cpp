#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "qproj/number_basis.hpp"
#include "qproj/specfun.hpp"

namespace qproj {

std::complex<double> wigner_mn_value(unsigned n, unsigned m, double x, double p) {
  const double r2 = x * x + p * p;
  if (r2 == 0.0) return m == n ? std::complex<double>(((n & 1u) ? -1.0 : 1.0) / std::numbers::pi) : 0.0;
  const double log_s2r = 0.5 * std::log(2.0 * r2);
  const double log_pref = 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - r2;
  const unsigned kmax = std::min(m, n);
  std::vector<double> terms(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) {
    const double lt = log_pref + (static_cast<double>(m) + n - 2.0 * k) * log_s2r - std::lgamma(k + 1.0) -
                      std::lgamma(m - k + 1.0) - std::lgamma(n - k + 1.0);
    terms[k] = ((k & 1u) ? -1.0 : 1.0) * std::exp(lt);
  }
  const double radial = specfun::compensated_sum(terms).value / std::numbers::pi;
  const double theta = std::atan2(p, x);
  return std::polar(radial, theta * (static_cast<double>(n) - m));
}

WignerField wigner_mn(unsigned n, unsigned m, const Lattice2D& grid) {
  WignerField f;
  f.grid = grid;
  f.values.resize(grid.x.points * grid.p.points);
  for (std::size_t i = 0; i < grid.x.points; ++i)
    for (std::size_t j = 0; j < grid.p.points; ++j)
      f.values[i * grid.p.points + j] = wigner_mn_value(n, m, grid.x.at(i), grid.p.at(j));
  return f;
}

WignerField wigner_pure_state(const Eigen::VectorXcd& c, const Lattice2D& grid, double du) {
  if (c.size() == 0) throw std::invalid_argument("wigner_pure_state: empty state");
  if (!(du > 0.0)) throw std::invalid_argument("wigner_pure_state: du must be positive");
  const auto N = static_cast<unsigned>(c.size() - 1);
  // Hermite functions are negligible beyond this radius.
  const double reach = std::sqrt(2.0 * N + 1.0) + 9.0;
  const auto nu = static_cast<std::size_t>(std::ceil(reach / du));
  std::vector<double> h(N + 1);
  auto psi = [&](double x) {
    if (std::abs(x) > reach) return std::complex<double>(0.0);
    specfun::hermite_functions(N, x, std::span<double>(h.data(), h.size()));
    std::complex<double> s = 0.0;
    for (unsigned n = 0; n <= N; ++n) s += c[n] * h[n];
    return s;
  };
  const std::size_t np = grid.p.points;
  std::vector<std::complex<double>> phase(np * (nu + 1));
  for (std::size_t j = 0; j < np; ++j)
    for (std::size_t k = 0; k <= nu; ++k)
      phase[j * (nu + 1) + k] = std::polar(1.0, 2.0 * grid.p.at(j) * static_cast<double>(k) * du);

  WignerField f;
  f.grid = grid;
  f.values.assign(grid.x.points * np, 0.0);
  std::vector<std::complex<double>> minus(nu + 1), plus(nu + 1);
  for (std::size_t i = 0; i < grid.x.points; ++i) {
    const double x = grid.x.at(i);
    for (std::size_t k = 0; k <= nu; ++k) {
      minus[k] = psi(x - static_cast<double>(k) * du);
      plus[k] = psi(x + static_cast<double>(k) * du);
    }
    for (std::size_t j = 0; j < np; ++j) {
      // u and -u folded together: 2 Re(e^{2ipu} psi(x-u) psi*(x+u)) for u > 0.
      double s = (minus[0] * std::conj(plus[0])).real();
      for (std::size_t k = 1; k <= nu; ++k) {
        const double w = k == nu ? 1.0 : 2.0;
        s += w * (phase[j * (nu + 1) + k] * minus[k] * std::conj(plus[k])).real();
      }
      f.values[i * np + j] = s * du / std::numbers::pi;
    }
  }
  return f;
}

std::complex<double> WignerField::integral() const {
  std::complex<double> s = 0.0;
  const std::size_t nx = grid.x.points;
  const std::size_t np = grid.p.points;
  for (std::size_t i = 0; i < nx; ++i) {
    const double wx = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < np; ++j) {
      const double wp = (j == 0 || j + 1 == np) ? 0.5 : 1.0;
      s += wx * wp * values[i * np + j];
    }
  }
  return s * grid.x.step() * grid.p.step();
}

Lattice2D default_wigner_lattice(unsigned N) {
  const double L = std::sqrt(2.0 * N) + 5.0;
  return {Grid1D(-L, L, 401), Grid1D(-L, L, 401)};
}

}  // namespace qproj
