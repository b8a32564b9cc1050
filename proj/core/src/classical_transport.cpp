#include "qproj/classical_transport.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>

#include "qproj/specfun.hpp"

namespace qproj::classical {

namespace {

// Piecewise-linear interpolant of samples on a uniform grid, zero outside.
double interpolate(const Grid1D& g, const std::vector<double>& v, double x) {
  if (x < g.lo || x > g.hi) return 0.0;
  const double h = g.step();
  const double u = (x - g.lo) / h;
  auto i = static_cast<std::size_t>(u);
  if (i + 1 >= g.points) return v.back();
  const double f = u - static_cast<double>(i);
  return (1.0 - f) * v[i] + f * v[i + 1];
}

// int_t^inf of the piecewise-linear interpolant.
double tail_mass(const Grid1D& g, const std::vector<double>& v, double t) {
  if (t >= g.hi) return 0.0;
  const double h = g.step();
  double total = 0.0;
  std::size_t start = 0;
  if (t > g.lo) {
    const double u = (t - g.lo) / h;
    start = std::min(static_cast<std::size_t>(u), g.points - 2);
    const double xs = g.at(start + 1);
    const double vt = interpolate(g, v, t);
    total += 0.5 * (vt + v[start + 1]) * (xs - t);
    ++start;
  }
  for (std::size_t i = start; i + 1 < g.points; ++i) total += 0.5 * (v[i] + v[i + 1]) * h;
  return total;
}

std::size_t ode_points(const OdeOptions& opt) {
  if (!(opt.dx > 0.0) || !(opt.hi > opt.lo)) throw std::invalid_argument("classical: need dx > 0 and hi > lo");
  return static_cast<std::size_t>(std::llround((opt.hi - opt.lo) / opt.dx)) + 1;
}

void check_scenario(double M, double dT) {
  if (!(M > 0.0) || !(dT > 0.0)) throw std::invalid_argument("classical: M and dT must be positive");
}

}  // namespace

RescaledDensity rescale_momentum(const Grid1D& p_grid, const std::vector<double>& nu, double M, double dT) {
  check_scenario(M, dT);
  if (nu.size() != p_grid.points) throw std::invalid_argument("rescale_momentum: size mismatch");
  const double c = dT / M;
  RescaledDensity r{Grid1D(p_grid.lo * c, p_grid.hi * c, p_grid.points), nu};
  for (double& v : r.density) v /= c;
  return r;
}

double sweep(const std::vector<double>& mu, const std::vector<double>& nut, double dx) {
  if (mu.size() != nut.size()) throw std::invalid_argument("sweep: size mismatch");
  double s = 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
    const double m = mu[i];
    const double n = nut[i];
    if (q > 0.0) {
      const double qn = q + (n - m) * dx;
      if (qn < 0.0) {
        const double t = q / (m - n);
        s += t * m + (dx - t) * n;
        q = 0.0;
      } else {
        s += m * dx;
        q = qn;
      }
    } else if (m <= n) {
      s += m * dx;
      q = (n - m) * dx;
    } else {
      s += n * dx;
    }
  }
  return s;
}

ClassicalResult classical_max(const MarginalPair& mp, const OdeOptions& opt) {
  mp.validate(1e-3);
  check_scenario(mp.M, mp.dT);
  const RescaledDensity y = rescale_momentum(mp.p_grid, mp.nu, mp.M, mp.dT);
  const std::size_t n = ode_points(opt);
  std::vector<double> mu(n), nut(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = opt.lo + static_cast<double>(i) * opt.dx;
    mu[i] = interpolate(mp.x_grid, mp.mu, x);
    nut[i] = interpolate(y.y_grid, y.density, mp.a - x);
  }
  ClassicalResult r;
  r.p_star = sweep(mu, nut, opt.dx);
  r.dx = opt.dx;
  r.lo = opt.lo;
  r.hi = opt.hi;

  const double mu_peak = *std::max_element(mp.mu.begin(), mp.mu.end());
  const double nu_peak = *std::max_element(y.density.begin(), y.density.end());
  if (std::max(mp.mu.front(), mp.mu.back()) > opt.boundary_warn * std::max(mu_peak, 1.0))
    r.warnings.emplace_back("position density does not vanish at the grid edge");
  if (std::max(y.density.front(), y.density.back()) > opt.boundary_warn * std::max(nu_peak, 1.0))
    r.warnings.emplace_back("momentum density does not vanish at the grid edge");
  if (mp.x_grid.lo < opt.lo || mp.x_grid.hi > opt.hi || mp.a - y.y_grid.hi < opt.lo || mp.a - y.y_grid.lo > opt.hi)
    r.warnings.emplace_back("marginal support extends beyond the integration window");
  return r;
}

double greedy_matching_oracle(const std::vector<double>& xs, const std::vector<double>& ys, double a) {
  if (xs.empty()) return 0.0;
  // Smallest x against largest remaining y: an x that fails is dropped.
  std::size_t i = 0;
  std::size_t j = ys.size();
  std::size_t matched = 0;
  while (i < xs.size() && j > 0) {
    if (xs[i] + ys[j - 1] >= a) {
      ++matched;
      --j;
    }
    ++i;
  }
  return static_cast<double>(matched) / static_cast<double>(xs.size());
}

std::vector<double> quantile_samples(const Grid1D& g, const std::vector<double>& v, std::size_t n) {
  if (v.size() != g.points) throw std::invalid_argument("quantile_samples: size mismatch");
  const double h = g.step();
  std::vector<double> cdf(g.points, 0.0);
  for (std::size_t i = 1; i < g.points; ++i) cdf[i] = cdf[i - 1] + 0.5 * (v[i - 1] + v[i]) * h;
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::invalid_argument("quantile_samples: density has no mass");
  std::vector<double> out(n);
  std::size_t cell = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = total * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    while (cell + 2 < g.points && cdf[cell + 1] < target) ++cell;
    // Invert the quadratic CDF on the cell with linear density.
    const double r = target - cdf[cell];
    const double a = v[cell];
    const double slope = (v[cell + 1] - v[cell]) / h;
    double t;
    if (std::abs(slope) * h < 1e-12 * std::max(a, 1e-300)) {
      t = a > 0.0 ? r / a : 0.5 * h;
    } else {
      const double disc = std::max(0.0, a * a + 2.0 * slope * r);
      t = 2.0 * r / (a + std::sqrt(disc));
    }
    out[k] = g.at(cell) + std::clamp(t, 0.0, h);
  }
  return out;
}

double independent_coupling_bound(const MarginalPair& mp) {
  const RescaledDensity y = rescale_momentum(mp.p_grid, mp.nu, mp.M, mp.dT);
  std::vector<double> f(mp.x_grid.points);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = mp.mu[i] * tail_mass(y.y_grid, y.density, mp.a - mp.x_grid.at(i));
  return trapezoid(f, mp.x_grid.step());
}

double threshold_bound(const MarginalPair& mp, double t) {
  const RescaledDensity y = rescale_momentum(mp.p_grid, mp.nu, mp.M, mp.dT);
  return tail_mass(mp.x_grid, mp.mu, t) + tail_mass(y.y_grid, y.density, mp.a - t);
}

double best_threshold_bound(const MarginalPair& mp) {
  double best = 1.0;
  for (std::size_t i = 0; i < mp.x_grid.points; ++i) best = std::min(best, threshold_bound(mp, mp.x_grid.at(i)));
  return best;
}

std::size_t parameter_count(unsigned N) { return static_cast<std::size_t>(N + 1) * (N + 1); }

Eigen::VectorXd to_parameters(const Eigen::MatrixXcd& rho) {
  const auto d = static_cast<std::size_t>(rho.rows());
  Eigen::VectorXd th(static_cast<Eigen::Index>(d * d));
  Eigen::Index k = 0;
  for (Eigen::Index m = 0; m < rho.rows(); ++m) th[k++] = rho(m, m).real();
  for (Eigen::Index m = 0; m < rho.rows(); ++m)
    for (Eigen::Index n = m + 1; n < rho.rows(); ++n) {
      th[k++] = rho(m, n).real();
      th[k++] = rho(m, n).imag();
    }
  return th;
}

Eigen::MatrixXcd from_parameters(const Eigen::VectorXd& th, unsigned N) {
  if (static_cast<std::size_t>(th.size()) != parameter_count(N))
    throw std::invalid_argument("from_parameters: wrong parameter count");
  const Eigen::Index d = N + 1;
  Eigen::MatrixXcd rho(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index m = 0; m < d; ++m) rho(m, m) = th[k++];
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = m + 1; n < d; ++n) {
      rho(m, n) = {th[k], th[k + 1]};
      rho(n, m) = std::conj(rho(m, n));
      k += 2;
    }
  return rho;
}

Eigen::MatrixXcd gradient_to_matrix(const Eigen::VectorXd& g, unsigned N) {
  if (static_cast<std::size_t>(g.size()) != parameter_count(N))
    throw std::invalid_argument("gradient_to_matrix: wrong parameter count");
  const Eigen::Index d = N + 1;
  Eigen::MatrixXcd G(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index m = 0; m < d; ++m) G(m, m) = g[k++];
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = m + 1; n < d; ++n) {
      G(m, n) = 0.5 * std::complex<double>(g[k], g[k + 1]);
      G(n, m) = std::conj(G(m, n));
      k += 2;
    }
  return G;
}

GradientResult classical_max_gradient(const Eigen::MatrixXcd& rho, const OdeOptions& opt, const StateScenario& sc,
                                      bool with_gradient) {
  check_scenario(sc.M, sc.dT);
  if (rho.rows() != rho.cols() || rho.rows() < 1) throw std::invalid_argument("classical_max_gradient: bad rho");
  const auto N = static_cast<unsigned>(rho.rows() - 1);
  const std::size_t P = parameter_count(N);
  const std::size_t n_pts = ode_points(opt);
  const double scale = sc.M / sc.dT;  // nu~(y) = scale * nu(scale * y)
  // Squared Hermite functions are below 1e-28 past this radius.
  const double radius = std::sqrt(2.0 * N + 1.0) + 9.0;

  // d(rho_mn-part)/d(theta) coefficients for the two quadratic forms.
  struct Pair {
    unsigned m, n;
    double cos_d, sin_d;
  };
  std::vector<Pair> pairs;
  for (unsigned m = 0; m <= N; ++m)
    for (unsigned n = m + 1; n <= N; ++n) {
      const int r = static_cast<int>((n - m) % 4);
      const double c = r == 0 ? 1.0 : (r == 2 ? -1.0 : 0.0);
      const double s = r == 1 ? 1.0 : (r == 3 ? -1.0 : 0.0);
      pairs.push_back({m, n, c, s});
    }
  const Eigen::VectorXd th = to_parameters(rho);
  // Value-only path: mu = v^T Re(rho) v, nu = w^T Re(rho_p) w.
  Eigen::MatrixXd rho_x, rho_p;
  if (!with_gradient) {
    rho_x = rho.real();
    rho_p.resize(rho.rows(), rho.cols());
    for (Eigen::Index m = 0; m < rho.rows(); ++m)
      for (Eigen::Index n = 0; n < rho.cols(); ++n) {
        const auto r = static_cast<int>((((n - m) % 4) + 4) % 4);
        const double c = r == 0 ? 1.0 : (r == 2 ? -1.0 : 0.0);
        const double sn = r == 1 ? 1.0 : (r == 3 ? -1.0 : 0.0);
        rho_p(m, n) = c * rho(m, n).real() - sn * rho(m, n).imag();
      }
  }

  std::vector<double> v(N + 1), w(N + 1);
  Eigen::VectorXd mu_l = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P));
  Eigen::VectorXd nu_l = mu_l;
  Eigen::VectorXd s_l = mu_l;
  Eigen::VectorXd q_l = mu_l;

  // Fills mu_l (or nu_l) with derivatives of the density at one point and
  // returns its value.
  auto eval = [&](const std::vector<double>& f, bool momentum, Eigen::VectorXd& out) {
    double val = 0.0;
    Eigen::Index k = 0;
    for (unsigned m = 0; m <= N; ++m) {
      const double d = f[m] * f[m];
      out[k] = d;
      val += th[k] * d;
      ++k;
    }
    for (const Pair& pr : pairs) {
      const double prod = 2.0 * f[pr.m] * f[pr.n];
      const double dre = momentum ? pr.cos_d * prod : prod;
      const double dim = momentum ? -pr.sin_d * prod : 0.0;
      out[k] = dre;
      out[k + 1] = dim;
      val += th[k] * dre + th[k + 1] * dim;
      k += 2;
    }
    return val;
  };

  GradientResult res;
  double s = 0.0;
  double q = 0.0;
  const double dx = opt.dx;
  for (std::size_t i = 0; i + 1 < n_pts; ++i) {
    const double x = opt.lo + static_cast<double>(i) * dx;
    const double p = scale * (sc.a - x);
    const bool in_x = std::abs(x) <= radius;
    const bool in_p = std::abs(p) <= radius;
    if (!in_x && !in_p && q == 0.0) continue;

    double m = 0.0;
    double n = 0.0;
    if (in_x) {
      specfun::hermite_functions(N, x, std::span<double>(v.data(), v.size()));
      if (with_gradient) {
        m = eval(v, false, mu_l);
      } else {
        const Eigen::Map<const Eigen::VectorXd> vm(v.data(), N + 1);
        m = vm.dot(rho_x * vm);
      }
    } else if (with_gradient) {
      mu_l.setZero();
    }
    if (in_p) {
      specfun::hermite_functions(N, p, std::span<double>(w.data(), w.size()));
      if (with_gradient) {
        n = scale * eval(w, true, nu_l);
        nu_l *= scale;
      } else {
        const Eigen::Map<const Eigen::VectorXd> wm(w.data(), N + 1);
        n = scale * wm.dot(rho_p * wm);
      }
    } else if (with_gradient) {
      nu_l.setZero();
    }

    if (q > 0.0) {
      const double qn = q + (n - m) * dx;
      if (qn < 0.0) {
        const double t = q / (m - n);
        s += t * m + (dx - t) * n;
        q = 0.0;
        ++res.landings;
        if (std::abs(m - n) < opt.degenerate_gap) ++res.degenerate_landings;
        if (with_gradient) {
          // Differentiating through the landing time t = q/(m - n).
          s_l += q_l + dx * nu_l;
          q_l.setZero();
        }
      } else {
        s += m * dx;
        q = qn;
        if (with_gradient) {
          s_l += dx * mu_l;
          q_l += dx * (nu_l - mu_l);
        }
      }
    } else if (m <= n) {
      s += m * dx;
      q = (n - m) * dx;
      if (with_gradient) {
        s_l += dx * mu_l;
        q_l = dx * (nu_l - mu_l);
      }
    } else {
      s += n * dx;
      if (with_gradient) s_l += dx * nu_l;
    }
  }
  res.p_star = s;
  if (with_gradient) {
    res.gradient = s_l;
    res.gradient_matrix = gradient_to_matrix(s_l, N);
  }
  if (res.degenerate_landings > 0) {
    std::ostringstream os;
    os << res.degenerate_landings << " landing(s) with |mu - nu~| below " << opt.degenerate_gap
       << "; gradient may be inaccurate";
    res.warnings.push_back(os.str());
  }
  return res;
}

double classical_max_state(const Eigen::MatrixXcd& rho, const OdeOptions& opt, const StateScenario& sc) {
  return classical_max_gradient(rho, opt, sc, false).p_star;
}

}  // namespace qproj::classical
