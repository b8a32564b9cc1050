#pragma once
// Independent reference implementations used as test oracles. None of these
// call into the library under test.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

constexpr double kPi = std::numbers::pi;

// psi_n(x) from the unnormalized Hermite polynomial in long double and an
// explicit normalization exp(-x^2/2) / sqrt(2^n n! sqrt(pi)). Good for n <= 60.
inline double hermite_function(unsigned n, double x) {
  const long double z = x;
  long double h0 = 1.0L, h1 = 2.0L * z;
  long double h = n == 0 ? h0 : h1;
  for (unsigned k = 1; k < n; ++k) {
    h = 2.0L * z * h1 - 2.0L * k * h0;
    h0 = h1;
    h1 = h;
  }
  const long double log_norm =
      0.5L * (n * std::log(2.0L) + std::lgamma(static_cast<long double>(n) + 1.0L) + 0.5L * std::log(kPi));
  return static_cast<double>(h * std::exp(-0.5L * z * z - log_norm));
}

// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// <n|Theta(X)|m> by quadrature over x > 0.
inline double theta_x_quadrature(unsigned n, unsigned m) {
  const double R = std::sqrt(2.0 * std::max(n, m) + 1.0) + 12.0;
  return simpson([&](double x) { return hermite_function(n, x) * hermite_function(m, x); }, 0.0, R, 40000);
}

// Gauss-Legendre nodes and weights on [a, b] (Golub-Welsch).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Quadrature gauss_legendre(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  for (int i = 0; i < n; ++i) {
    const double t = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    q.nodes.push_back(0.5 * (b - a) * t + 0.5 * (a + b));
    q.weights.push_back((b - a) * v * v);
  }
  return q;
}

inline Quadrature midpoint_rule(int n, double a, double b) {
  Quadrature q;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back(a + (i + 0.5) * h);
    q.weights.push_back(h);
  }
  return q;
}

// Complex position kernel of Theta(X+P) - Theta(P) restricted to x, y <= 0:
// (1/2pi) (e^{i(y^2 - x^2)/2} - 1) / (i (y - x)), with its diagonal limit x/(2pi).
inline std::complex<double> omega_kernel(double x, double y) {
  const double d = y - x;
  if (std::abs(d) < 1e-12) return {0.5 * (x + y) / (2.0 * kPi), 0.0};
  const std::complex<double> i(0.0, 1.0);
  return (std::exp(i * 0.5 * (y * y - x * x)) - 1.0) / (i * d) / (2.0 * kPi);
}

// Largest eigenvalue of the Nystrom discretization of omega_kernel.
inline double phi_nystrom(const Quadrature& q) {
  const auto n = static_cast<Eigen::Index>(q.nodes.size());
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      A(i, j) = std::sqrt(q.weights[i] * q.weights[j]) * omega_kernel(q.nodes[i], q.nodes[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double phi_midpoint(double alpha, int n) {
  return phi_nystrom(midpoint_rule(n, -std::sqrt(alpha), 0.0));
}

inline double phi_gauss(double alpha, int n) {
  return phi_nystrom(gauss_legendre(n, -std::sqrt(alpha), 0.0));
}

// Maximum bipartite matching between xs and ys with edges x + y >= a
// (Kuhn's augmenting paths), as a fraction of |xs|.
inline double matching_fraction(const std::vector<double>& xs, const std::vector<double>& ys, double a) {
  const std::size_t n = xs.size(), m = ys.size();
  std::vector<int> owner(m, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (xs[i] + ys[j] < a || seen[j]) continue;
      seen[j] = 1;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]))) {
        owner[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    seen.assign(m, 0);
    if (augment(i)) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(n);
}

// Central difference of f at x along coordinate k.
inline double central_difference(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                 Eigen::Index k, double h) {
  Eigen::VectorXd xp = x, xm = x;
  xp(k) += h;
  xm(k) -= h;
  return (f(xp) - f(xm)) / (2.0 * h);
}

// Rocket simulated as point bodies in free flight. Inputs are the initial
// rocket phase-space point and, per burn, the fuel-rocket relative position and
// relative momentum created by the split. Returns the final rocket position.
struct Body {
  double x, p, mass;
};

inline double simulate_rocket(double M, const std::vector<std::pair<double, double>>& burns /* (t, m) */,
                              double t_final, double x0, double p0, const std::vector<double>& xrel,
                              const std::vector<double>& prel, std::vector<Body>* fuel = nullptr,
                              Body* rocket_out = nullptr) {
  Body r{x0, p0, M};
  std::vector<Body> debris;
  double t = 0.0;
  auto fly = [&](double dt) {
    r.x += r.p / r.mass * dt;
    for (auto& b : debris) b.x += b.p / b.mass * dt;
  };
  for (std::size_t k = 0; k < burns.size(); ++k) {
    fly(burns[k].first - t);
    t = burns[k].first;
    const double m = burns[k].second;
    const double mr = r.mass - m;
    // Centre of mass and total momentum are preserved by the split.
    const double xr = r.x - m / r.mass * xrel[k];
    const double xf = xr + xrel[k];
    const double pr = mr / r.mass * r.p - prel[k];
    const double pf = r.p - pr;
    debris.push_back({xf, pf, m});
    r = {xr, pr, mr};
  }
  fly(t_final - t);
  if (fuel) *fuel = debris;
  if (rocket_out) *rocket_out = r;
  return r.x;
}

// Final-position coefficients (c, d) extracted from simulate_rocket by probing
// its linear dependence on each variable.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> rocket_coefficients(
    double M, const std::vector<std::pair<double, double>>& burns, double t_final) {
  const std::size_t n = burns.size();
  Eigen::VectorXd c(n + 1), d(n + 1);
  std::vector<double> zx(n, 0.0), zp(n, 0.0);
  const double base = simulate_rocket(M, burns, t_final, 0, 0, zx, zp);
  c(0) = simulate_rocket(M, burns, t_final, 1, 0, zx, zp) - base;
  d(0) = simulate_rocket(M, burns, t_final, 0, 1, zx, zp) - base;
  for (std::size_t k = 0; k < n; ++k) {
    auto ex = zx, ep = zp;
    ex[k] = 1.0;
    ep[k] = 1.0;
    c(k + 1) = simulate_rocket(M, burns, t_final, 0, 0, ex, zp) - base;
    d(k + 1) = simulate_rocket(M, burns, t_final, 0, 0, zx, ep) - base;
  }
  return {c, d};
}

}  // namespace oracle
