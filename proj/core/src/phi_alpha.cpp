#include "qproj/phi_alpha.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qproj/parallel.hpp"
#include "qproj/precision.hpp"
#include "qproj/specfun.hpp"

namespace qproj::phi_alpha {

namespace {

using std::numbers::pi;
namespace mp = boost::multiprecision;
using Real200 = mp::number<mp::cpp_bin_float<200>>;

double log_remainder(double alpha, unsigned order) {
  const double m = 2.0 * order + 2.0;
  return std::log(std::sqrt(alpha) / (2.0 * pi)) - std::lgamma(m + 1.0) + m * std::log(alpha / 4.0);
}

// Sparse list of (j, k, f_jk) for the order-N truncated kernel, in type Real.
template <class Real>
struct Term {
  unsigned j, k;
  Real f;
};

template <class Real>
std::vector<Term<Real>> kernel_terms(unsigned order) {
  // (1/4pi)(x+y) sum_k (-1)^k / ((2k+1)! 4^{2k}) (y^2 - x^2)^{2k}
  const unsigned deg = 4 * order + 2;
  std::vector<std::vector<Real>> f(deg, std::vector<Real>(deg, Real(0)));
  const Real four_pi = 4 * boost::math::constants::pi<Real>();
  Real fact = 1;  // (2k+1)!
  Real pow16 = 1;
  for (unsigned k = 0; k <= order; ++k) {
    if (k > 0) {
      fact *= (2 * k) * (2 * k + 1);
      pow16 *= 16;
    }
    const Real ck = ((k & 1u) ? Real(-1) : Real(1)) / (fact * pow16 * four_pi);
    Real binom = 1;  // C(2k, i)
    for (unsigned i = 0; i <= 2 * k; ++i) {
      if (i > 0) binom = binom * (2 * k - i + 1) / i;
      const Real c = ((i & 1u) ? Real(-1) : Real(1)) * binom * ck;
      const unsigned px = 2 * i;
      const unsigned py = 2 * (2 * k - i);
      f[px + 1][py] += c;
      f[px][py + 1] += c;
    }
  }
  std::vector<Term<Real>> out;
  for (unsigned j = 0; j < deg; ++j)
    for (unsigned k = 0; k < deg; ++k)
      if (f[j][k] != 0) out.push_back({j, k, f[j][k]});
  return out;
}

// Columns a_j = Xhat^j e_0 (Legendre coefficients of x^j), as a dense
// upper-triangular matrix A(n, j).
template <class Real>
std::vector<std::vector<Real>> monomial_columns(double alpha, unsigned dim) {
  const Real s = mp::sqrt(Real(alpha));
  std::vector<std::vector<Real>> a(dim, std::vector<Real>(dim, Real(0)));  // a[j][n]
  a[0][0] = 1;
  for (unsigned j = 1; j < dim; ++j) {
    const auto& prev = a[j - 1];
    auto& cur = a[j];
    for (unsigned n = 0; n <= j; ++n) {
      Real v = -s / 2 * (n < j ? prev[n] : Real(0));
      if (n >= 1) v += s * n / (2 * (2 * n - 1)) * prev[n - 1];
      if (n + 1 < j) v += s * (n + 1) / (2 * (2 * n + 3)) * prev[n + 1];
      cur[n] = v;
    }
  }
  return a;
}

template <class Real>
Eigen::MatrixXd reduced_matrix_t(double alpha, unsigned order) {
  const unsigned dim = 4 * order + 2;
  const auto terms = kernel_terms<Real>(order);
  const auto a = monomial_columns<Real>(alpha, dim);
  // C(j, n) = sum_k f_jk A(n, k)
  std::vector<std::vector<Real>> c(dim, std::vector<Real>(dim, Real(0)));
  for (const auto& t : terms)
    for (unsigned n = 0; n <= t.k; ++n) c[t.j][n] += t.f * a[t.k][n];
  // H(m, n) = sum_j A(m, j) C(j, n), A(m, j) = 0 for j < m
  Eigen::MatrixXd h(dim, dim);
  for (unsigned m = 0; m < dim; ++m)
    for (unsigned n = m; n < dim; ++n) {
      Real acc = 0;
      for (unsigned j = m; j < dim; ++j) acc += a[j][m] * c[j][n];
      h(m, n) = static_cast<double>(acc);
    }
  // H is symmetric analytically; symmetrize the rounding.
  for (unsigned m = 0; m < dim; ++m)
    for (unsigned n = 0; n < m; ++n) h(m, n) = h(n, m);
  Eigen::VectorXd sq(dim);
  for (unsigned n = 0; n < dim; ++n) sq(n) = std::sqrt(std::sqrt(alpha) / (2.0 * n + 1.0));
  return sq.asDiagonal() * h * sq.asDiagonal();
}

// log10 of sum |f_jk| 2 alpha^{j/2} 2 alpha^{k/2}: size of the largest
// intermediate in the assembly.
double log10_assembly_magnitude(double alpha, unsigned order) {
  const double la = 0.5 * std::log10(alpha);
  double best = -1e300;
  std::vector<double> logs;
  for (unsigned k = 0; k <= order; ++k) {
    const double lck = -std::lgamma(2.0 * k + 2.0) / std::log(10.0) - 2.0 * k * std::log10(4.0) -
                       std::log10(4 * pi);
    for (unsigned i = 0; i <= 2 * k; ++i) {
      const double lb = (std::lgamma(2.0 * k + 1.0) - std::lgamma(i + 1.0) - std::lgamma(2.0 * k - i + 1.0)) /
                        std::log(10.0);
      const double l = lck + lb + (4.0 * k + 1.0) * la + std::log10(8.0);
      logs.push_back(l);
      best = std::max(best, l);
    }
  }
  double s = 0.0;
  for (double l : logs) s += std::pow(10.0, l - best);
  return best + std::log10(s);
}

}  // namespace

double kernel_value(double x, double y) {
  return (x + y) / (4.0 * pi) * specfun::sinc((y * y - x * x) / 4.0);
}

double remainder_bound(double alpha, unsigned order) { return std::exp(log_remainder(alpha, order)); }

unsigned choose_order(double alpha, double delta) {
  if (!(alpha > 0.0)) throw std::domain_error("choose_order: alpha must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("choose_order: delta must lie in (0, 1)");
  const double target = std::log(delta) - 0.5 * std::log(alpha);
  for (unsigned n = 0; n < 100000; ++n)
    if (log_remainder(alpha, n) <= target) return n;
  throw std::domain_error("choose_order: no order reaches the requested precision");
}

std::vector<std::vector<double>> taylor_coefficients(unsigned order) {
  const unsigned dim = 4 * order + 2;
  std::vector<std::vector<double>> f(dim, std::vector<double>(dim, 0.0));
  for (const auto& t : kernel_terms<mp::cpp_bin_float_50>(order)) f[t.j][t.k] = static_cast<double>(t.f);
  return f;
}

LegendreBasis legendre_basis(double alpha, unsigned dim) {
  if (!(alpha > 0.0) || dim == 0) throw std::domain_error("legendre_basis: need alpha > 0, dim > 0");
  const double s = std::sqrt(alpha);
  LegendreBasis b;
  b.alpha = alpha;
  b.gram.resize(dim);
  b.xhat = Eigen::MatrixXd::Zero(dim, dim);
  for (unsigned n = 0; n < dim; ++n) {
    const double nn = n;
    b.gram(n) = s / (2.0 * nn + 1.0);
    b.xhat(n, n) = -s / 2.0;
    if (n + 1 < dim) {
      b.xhat(n + 1, n) = s * (nn + 1.0) / (2.0 * (2.0 * nn + 1.0));
      b.xhat(n, n + 1) = s * (nn + 1.0) / (2.0 * (2.0 * nn + 3.0));
    }
  }
  return b;
}

Eigen::MatrixXd reduced_matrix(double alpha, unsigned order, unsigned* digits_used) {
  if (!(alpha > 0.0)) throw std::domain_error("phi: alpha must be positive");
  const double need = log10_assembly_magnitude(alpha, order) + 25.0;
  unsigned digits;
  Eigen::MatrixXd b;
  if (need <= 50) {
    digits = 50;
    b = reduced_matrix_t<mp::cpp_bin_float_50>(alpha, order);
  } else if (need <= 100) {
    digits = 100;
    b = reduced_matrix_t<mp::cpp_bin_float_100>(alpha, order);
  } else if (need <= 200) {
    digits = 200;
    b = reduced_matrix_t<Real200>(alpha, order);
  } else {
    throw PrecisionError("phi: alpha too large for the supported working precision");
  }
  if (digits_used) *digits_used = digits;
  return b;
}

PhiResult phi_at_order(double alpha, unsigned order) {
  PhiResult r;
  r.alpha = alpha;
  r.order = order;
  r.basis_size = 4 * order + 2;
  // G-hat is diagonal; its condition number is 2*dim - 1.
  if (2.0 * r.basis_size - 1.0 > 1e12) throw PrecisionError("phi: Gram matrix too ill-conditioned");
  const Eigen::MatrixXd b = reduced_matrix(alpha, order, &r.digits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw PrecisionError("phi: eigensolver failed");
  r.phi = es.eigenvalues().maxCoeff();
  r.delta = remainder_bound(alpha, order) * std::sqrt(alpha);
  return r;
}

PhiResult phi(double alpha, double delta) { return phi_at_order(alpha, choose_order(alpha, delta)); }

std::vector<CurvePoint> phi_curve(std::vector<double> alphas, double delta, unsigned threads) {
  std::sort(alphas.begin(), alphas.end());
  std::vector<CurvePoint> out(alphas.size());
  // Large alpha costs most; schedule from the right end.
  parallel_for(
      alphas.size(),
      [&](std::size_t i) {
        const std::size_t idx = alphas.size() - 1 - i;
        out[idx].result.alpha = alphas[idx];
        try {
          out[idx].result = phi(alphas[idx], delta);
        } catch (const std::exception& e) {
          out[idx].error = e.what();
        }
      },
      threads);
  return out;
}

double linear_upper_bound(double alpha) { return (2.0 * std::sqrt(3.0) - 3.0) * alpha / (24.0 * pi); }

double generalized_max_eigenvalue_2x2(const Eigen::Matrix2d& F, const Eigen::Matrix2d& G) {
  // det(F - l G) = a l^2 + b l + c
  const double a = G.determinant();
  const double b = -(F(0, 0) * G(1, 1) + F(1, 1) * G(0, 0) - F(0, 1) * G(1, 0) - F(1, 0) * G(0, 1));
  const double c = F.determinant();
  const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
  // a > 0 for positive definite G; larger root, written to avoid cancellation.
  const double q = -0.5 * (b + (b >= 0.0 ? disc : -disc));
  const double r1 = q / a;
  const double r2 = q != 0.0 ? c / q : r1;
  return std::max(r1, r2);
}

LinearBoundProblem linear_bound_problem(double alpha) {
  // psi_0 = indicator, psi_1 = x * indicator on [-s, 0].
  const double s = std::sqrt(alpha);
  Eigen::Matrix2d g;
  g << s, -s * s / 2.0, -s * s / 2.0, s * s * s / 3.0;
  Eigen::Matrix2d f;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) f(j, k) = (g(j, 0) * g(1, k) + g(j, 1) * g(0, k)) / (4.0 * pi);
  LinearBoundProblem p{f, g, 0.0};
  p.lambda = alpha > 0.0 ? generalized_max_eigenvalue_2x2(f, g) : 0.0;
  return p;
}

InverseSqrtFit fit_inverse_sqrt(const std::vector<double>& alpha, const std::vector<double>& phi) {
  if (alpha.size() != phi.size() || alpha.size() < 2)
    throw std::invalid_argument("fit_inverse_sqrt: need >= 2 matching points");
  Eigen::MatrixXd a(alpha.size(), 2);
  Eigen::VectorXd y(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = 1.0 / std::sqrt(alpha[i]);
    y(static_cast<Eigen::Index>(i)) = phi[i];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  return {c(0), c(1)};
}

}  // namespace qproj::phi_alpha
