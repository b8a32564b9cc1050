#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qproj/cbm.hpp"
#include "qproj/parallel.hpp"

namespace qproj::cbm {

namespace {

using std::numbers::pi;
using cd = std::complex<double>;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr cd I{0.0, 1.0};

struct Accum {
  cd value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod over consecutive panels [b_i, b_{i+1}].
template <class F>
Accum integrate_panels(F&& f, const std::vector<double>& breaks, const KernelOptions& opt) {
  Accum acc;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double err = 0.0;
    acc.value += GK::integrate(f, breaks[i], breaks[i + 1], opt.max_depth, opt.tol, &err);
    acc.error += err;
  }
  return acc;
}

// Breakpoints on [a, b] with panels no wider than `width`.
std::vector<double> uniform_breaks(double a, double b, double width) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / width)));
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  return v;
}

// a, a + first, a + 2 first, a + 4 first, ..., b
std::vector<double> geometric_breaks(double a, double first, double b) {
  std::vector<double> v{a};
  for (double w = first; a + w < b; w *= 2.0) v.push_back(a + w);
  v.push_back(b);
  return v;
}

// Quarter period of e^{i freq x}, capped at 1.
double panel_width(double freq) { return std::min(1.0, 0.5 * pi / std::max(std::abs(freq), 1e-12)); }

// int_0^inf e^{-i eta u} / cosh u du
Accum sech_fourier(double eta, const KernelOptions& opt) {
  auto f = [eta](double u) { return std::polar(1.0 / std::cosh(u), -eta * u); };
  return integrate_panels(f, uniform_breaks(0.0, opt.x_cut, panel_width(eta)), opt);
}

// Diagonal entry B_{--}: exact limit (eps == 0) or regularized.
Accum bk_diagonal(double k, double eta, double eps, const KernelOptions& opt) {
  if (eps == 0.0) {
    auto f = [k, eta](double u) -> cd {
      if (u < 1e-12) return eta - 2.0 * k;
      return std::sin(eta * u - 2.0 * k * std::tanh(u)) / std::sinh(u);
    };
    Accum a = integrate_panels(f, uniform_breaks(0.0, opt.x_cut, panel_width(eta)), opt);
    a.value = 0.5 + a.value / pi;
    a.error /= pi;
    return a;
  }
  auto f = [k, eta, eps](double x) -> cd {
    const double c = std::cosh(x);
    const double s = std::sinh(x);
    const double ph = eta * x - 2.0 * k * std::tanh(x);
    return (2.0 * eps * c * std::cos(ph) + 4.0 * s * std::sin(ph)) / (eps * eps * c * c + 4.0 * s * s);
  };
  // Geometric panels resolve the Lorentzian peak of width ~eps at the origin.
  std::vector<double> breaks{0.0};
  for (double b = eps / 8.0; b < 1.0; b *= 4.0) breaks.push_back(b);
  const auto tail = uniform_breaks(1.0, opt.x_cut, panel_width(eta));
  breaks.insert(breaks.end(), tail.begin(), tail.end());
  Accum a = integrate_panels(f, breaks, opt);
  a.value /= pi;
  a.error /= pi;
  return a;
}

cd coth_integrand_w(double k, double eta, cd w) {
  return std::exp(2.0 * I * k * w - I * eta * std::atanh(1.0 / w)) / (w * std::sqrt(w - 1.0) * std::sqrt(w + 1.0));
}

}  // namespace

std::pair<double, double> eig_2x2(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double r = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
  return {0.5 * (a + d) - r, 0.5 * (a + d) + r};
}

std::complex<double> coth_phase_integral(double k, double eta, const KernelOptions& opt, double* error) {
  if (k < 0.0) throw std::domain_error("coth_phase_integral: k must be non-negative");
  if (k == 0.0) {
    const Accum a = sech_fourier(eta, opt);
    if (error) *error = a.error;
    return a.value;
  }
  const double W = opt.ray_start;
  const double u_w = std::atanh(1.0 / W);
  // Real axis, u >= u_W: the coth phase oscillates at most at rate 2k (W^2 - 1).
  auto fu = [k, eta](double u) {
    return std::polar(1.0 / std::cosh(u), -eta * u + 2.0 * k / std::tanh(u));
  };
  const double freq = std::abs(eta) + 2.0 * k * (W * W - 1.0);
  Accum head = integrate_panels(fu, uniform_breaks(u_w, opt.x_cut, panel_width(freq)), opt);
  // Remaining w = coth u in [W, inf) along w = W + i s, where e^{2ikw} decays.
  const double s_max = std::max(10.0, 18.0 / k);
  auto fs = [k, eta, W](double s) { return I * coth_integrand_w(k, eta, cd(W, s)); };
  Accum tail = integrate_panels(fs, geometric_breaks(0.0, 0.5, s_max), opt);
  if (error) *error = head.error + tail.error;
  return head.value + tail.value;
}

std::complex<double> coth_phase_integral_ray(double k, double eta, const KernelOptions& opt, double* error) {
  if (!(k > 0.0)) throw std::domain_error("coth_phase_integral_ray: k must be positive");
  // w = 1 + i t^2, dw = 2 i t dt, sqrt(w - 1) = t e^{i pi/4}.
  const cd rot = 2.0 * I * std::polar(1.0, -pi / 4.0);
  auto f = [k, eta, rot](double t) -> cd {
    const cd w(1.0, t * t);
    return rot * std::exp(2.0 * I * k * w - I * eta * std::atanh(1.0 / w)) / (w * std::sqrt(w + 1.0));
  };
  const double t_max = std::sqrt(18.0 / k);
  std::vector<double> breaks{0.0};
  for (double b = 1e-6; b < 0.5; b *= 4.0) breaks.push_back(b);
  const auto rest = uniform_breaks(0.5, t_max, 0.25);
  breaks.insert(breaks.end(), rest.begin(), rest.end());
  const Accum a = integrate_panels(f, breaks, opt);
  if (error) *error = a.error;
  return a.value;
}

DilationBlock quadrant_block(double eta, const KernelOptions& opt) {
  const Accum i0 = sech_fourier(eta, opt);
  DilationBlock b;
  b.eta = eta;
  b.block(0, 0) = 0.5 * (1.0 + std::tanh(0.5 * pi * eta));
  b.block(1, 1) = 0.0;
  b.block(0, 1) = I / (2.0 * pi) * i0.value;
  b.block(1, 0) = std::conj(b.block(0, 1));
  b.quad_error = i0.error / (2.0 * pi);
  b.flagged = !(b.quad_error <= opt.max_error);
  return b;
}

DilationBlock bk_kernel(double k, double eta, double eps_reg, const KernelOptions& opt) {
  if (k < 0.0) throw std::domain_error("bk_kernel: k must be non-negative");
  if (eps_reg < 0.0) throw std::domain_error("bk_kernel: eps_reg must be non-negative");
  double jerr = 0.0;
  const cd j = coth_phase_integral(k, eta, opt, &jerr);
  const Accum diag = bk_diagonal(k, eta, eps_reg, opt);
  DilationBlock b;
  b.eta = eta;
  b.block(0, 0) = 0.0;
  b.block(1, 1) = diag.value.real();
  b.block(1, 0) = I / (2.0 * pi) * j;
  b.block(0, 1) = std::conj(b.block(1, 0));
  b.quad_error = diag.error + jerr / (2.0 * pi);
  b.flagged = !(b.quad_error <= opt.max_error);
  return b;
}

Weights paper_weights() { return {{0.0, 0.7673}, {0.1, -0.8767}, {0.5, 0.09895}}; }

std::vector<double> default_eta_grid() {
  std::vector<double> g;
  for (int i = -2000; i <= 2000; ++i) g.push_back(0.01 * i);
  return g;
}

DilationBlock tilde_A_block(const Weights& weights, double eta, const ScanOptions& opt) {
  DilationBlock total;
  total.eta = eta;
  if (opt.include_quadrant) {
    const DilationBlock a = quadrant_block(eta, opt.kernel);
    total.block += a.block;
    total.quad_error += a.quad_error;
  }
  for (const auto& [k, w] : weights) {
    if (w == 0.0) continue;
    const DilationBlock b = bk_kernel(k, eta, opt.eps_reg, opt.kernel);
    total.block += w * b.block;
    total.quad_error += std::abs(w) * b.quad_error;
  }
  total.flagged = !(total.quad_error <= opt.kernel.max_error);
  return total;
}

namespace {

std::vector<ScanRecord> evaluate(const Weights& weights, const std::vector<double>& etas, const ScanOptions& opt) {
  std::vector<ScanRecord> out(etas.size());
  parallel_for(
      etas.size(),
      [&](std::size_t i) {
        const DilationBlock b = tilde_A_block(weights, etas[i], opt);
        const auto [lo, hi] = eig_2x2(b.block);
        out[i] = {etas[i], b.block, lo, hi, b.quad_error, b.flagged};
      },
      opt.threads);
  return out;
}

}  // namespace

SpectralScanResult tilde_A_scan(const Weights& weights, const std::vector<double>& eta_grid, const ScanOptions& opt) {
  if (eta_grid.empty()) throw std::invalid_argument("tilde_A_scan: empty eta grid");
  std::vector<double> grid = eta_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<ScanRecord> recs = evaluate(weights, grid, opt);

  if (opt.refine && grid.size() >= 3) {
    std::vector<double> extra;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const bool first = i == 0;
      const bool last = i + 1 == recs.size();
      const bool local_min = (first || recs[i].lambda_min <= recs[i - 1].lambda_min) &&
                             (last || recs[i].lambda_min <= recs[i + 1].lambda_min);
      const bool local_max = (first || recs[i].lambda_max >= recs[i - 1].lambda_max) &&
                             (last || recs[i].lambda_max >= recs[i + 1].lambda_max);
      if (!local_min && !local_max) continue;
      const double lo = first ? grid[i] : grid[i - 1];
      const double hi = last ? grid[i] : grid[i + 1];
      for (int j = 1; j < 20; ++j) {
        const double e = lo + (hi - lo) * j / 20.0;
        if (e != grid[i]) extra.push_back(e);
      }
    }
    const auto more = evaluate(weights, extra, opt);
    recs.insert(recs.end(), more.begin(), more.end());
    std::sort(recs.begin(), recs.end(), [](const ScanRecord& a, const ScanRecord& b) { return a.eta < b.eta; });
  }

  SpectralScanResult res;
  res.records = std::move(recs);
  res.inf_lambda_min = res.records.front().lambda_min;
  res.eta_at_inf = res.records.front().eta;
  res.sup_lambda_max = res.records.front().lambda_max;
  res.eta_at_sup = res.records.front().eta;
  for (const auto& r : res.records) {
    if (r.lambda_min < res.inf_lambda_min) {
      res.inf_lambda_min = r.lambda_min;
      res.eta_at_inf = r.eta;
    }
    if (r.lambda_max > res.sup_lambda_max) {
      res.sup_lambda_max = r.lambda_max;
      res.eta_at_sup = r.eta;
    }
    if (r.flagged) ++res.flagged;
  }
  return res;
}

double upper_bound(const Weights& weights, const std::vector<double>& eta_grid, const ScanOptions& opt) {
  return -tilde_A_scan(weights, eta_grid, opt).inf_lambda_min;
}

}  // namespace qproj::cbm
