#include "qproj/number_basis.hpp"

#include <mpfr.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qproj/parallel.hpp"
#include "qproj/specfun.hpp"

namespace qproj {

namespace {

using std::numbers::pi;

// psi_n(0) and psi_n'(0) for n = 0..N.
struct BoundaryValues {
  std::vector<double> value;
  std::vector<double> slope;
};

BoundaryValues boundary_values(unsigned N) {
  BoundaryValues b;
  b.value.assign(N + 1, 0.0);
  b.slope.assign(N + 1, 0.0);
  b.value[0] = 1.0 / std::sqrt(std::sqrt(pi));
  for (unsigned n = 2; n <= N; n += 2)
    b.value[n] = -std::sqrt(static_cast<double>(n - 1) / n) * b.value[n - 2];
  for (unsigned n = 1; n <= N; n += 2) b.slope[n] = std::sqrt(2.0 * n) * b.value[n - 1];
  return b;
}

double boundary_element(const BoundaryValues& b, unsigned n, unsigned m) {
  if (n == m) return 0.5;
  if (((n + m) & 1u) == 0) return 0.0;
  return (b.value[n] * b.slope[m] - b.value[m] * b.slope[n]) / (2.0 * (static_cast<double>(m) - n));
}

// ln|t_k| for the scaled series S = sqrt(m! n!) w_nm.
double log_scaled_term(unsigned n, unsigned m, unsigned k) {
  const double a = 0.5 * (static_cast<double>(m) + n);
  return (a - k - 1.0) * std::log(2.0) + std::lgamma(a - k + 1.0) +
         0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - std::lgamma(k + 1.0) -
         std::lgamma(m - k + 1.0) - std::lgamma(n - k + 1.0);
}

// S = sqrt(m! n!) w_nm summed in MPFR. Precision grows until the sum keeps
// at least `keep_bits` significant bits after cancellation.
double scaled_series_mpfr(unsigned n, unsigned m, int keep_bits = 80) {
  const unsigned kmax = std::min(m, n);
  double log_max = -1e300;
  for (unsigned k = 0; k <= kmax; ++k) log_max = std::max(log_max, log_scaled_term(n, m, k));
  const double log2_max = log_max / std::log(2.0);
  long prec = static_cast<long>(std::max(0.0, log2_max)) + keep_bits + 64;

  for (int attempt = 0; attempt < 8; ++attempt) {
    mpfr_t t, s, tmp;
    mpfr_inits2(prec, t, s, tmp, static_cast<mpfr_ptr>(nullptr));
    // t_0 = 2^{a-1} Gamma(a+1) / sqrt(m! n!), a = (m+n)/2.
    const unsigned twice_a = m + n;
    mpfr_set_ui(tmp, twice_a + 2, MPFR_RNDN);
    mpfr_div_2ui(tmp, tmp, 1, MPFR_RNDN);
    mpfr_gamma(t, tmp, MPFR_RNDN);
    mpfr_set_ui(tmp, 2, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_pow_ui(tmp, tmp, twice_a, MPFR_RNDN);
    mpfr_mul(t, t, tmp, MPFR_RNDN);
    mpfr_div_2ui(t, t, 1, MPFR_RNDN);
    mpfr_fac_ui(tmp, m, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_div(t, t, tmp, MPFR_RNDN);
    mpfr_fac_ui(tmp, n, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_div(t, t, tmp, MPFR_RNDN);
    mpfr_set(s, t, MPFR_RNDN);
    for (unsigned k = 0; k < kmax; ++k) {
      mpfr_mul_ui(t, t, static_cast<unsigned long>(m - k) * (n - k), MPFR_RNDN);
      mpfr_div_ui(t, t, static_cast<unsigned long>(k + 1) * (twice_a - 2 * k), MPFR_RNDN);
      mpfr_neg(t, t, MPFR_RNDN);
      mpfr_add(s, s, t, MPFR_RNDN);
    }
    const double result = mpfr_get_d(s, MPFR_RNDN);
    const long exp_s = mpfr_zero_p(s) ? -prec : mpfr_get_exp(s);
    mpfr_clears(t, s, tmp, static_cast<mpfr_ptr>(nullptr));
    const long lost = static_cast<long>(std::ceil(log2_max)) - exp_s;
    if (prec - lost >= keep_bits) return result;
    prec += lost + keep_bits;
  }
  throw PrecisionError("theta_x_element: extended series did not converge");
}


// <n|Theta(X)|m> for all m < n with n - m odd, written into out[m]. The first
// series term is carried along m by its exact ratio, so each entry costs
// one square root plus the k-sum.
void extended_row(unsigned n, std::vector<double>& out, int keep_bits = 80) {
  out.assign(n + 1, 0.0);
  out[n] = 0.5;
  if (n == 0) return;
  // The widest cancellation in a row occurs next to the diagonal.
  double log2_max = 0.0;
  for (unsigned k = 0; k < n; ++k) log2_max = std::max(log2_max, log_scaled_term(n, n - 1, k) / std::log(2.0));
  long prec = static_cast<long>(log2_max) + keep_bits + 64;

  for (int attempt = 0; attempt < 8; ++attempt) {
    mpfr_t t0, t, s, tmp;
    mpfr_inits2(prec, t0, t, s, tmp, static_cast<mpfr_ptr>(nullptr));
    const unsigned m0 = (n + 1) % 2;
    // t_0(n, m0) = 2^{a-1} Gamma(a+1) / sqrt(m0! n!)
    mpfr_set_ui(tmp, n + m0 + 2, MPFR_RNDN);
    mpfr_div_2ui(tmp, tmp, 1, MPFR_RNDN);
    mpfr_gamma(t0, tmp, MPFR_RNDN);
    mpfr_set_ui(tmp, 2, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_pow_ui(tmp, tmp, n + m0, MPFR_RNDN);
    mpfr_mul(t0, t0, tmp, MPFR_RNDN);
    mpfr_div_2ui(t0, t0, 1, MPFR_RNDN);
    mpfr_fac_ui(tmp, n, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_div(t0, t0, tmp, MPFR_RNDN);
    bool ok = true;
    long worst_lost = 0;
    for (unsigned m = m0; m < n; m += 2) {
      if (m > m0) {
        // t_0(n, m) / t_0(n, m-2) = 2 (a_prev + 1) / sqrt(m (m-1)), a_prev = (n+m-2)/2
        mpfr_mul_ui(t0, t0, n + m, MPFR_RNDN);
        mpfr_set_ui(tmp, static_cast<unsigned long>(m) * (m - 1), MPFR_RNDN);
        mpfr_sqrt(tmp, tmp, MPFR_RNDN);
        mpfr_div(t0, t0, tmp, MPFR_RNDN);
      }
      mpfr_set(t, t0, MPFR_RNDN);
      mpfr_set(s, t0, MPFR_RNDN);
      long max_exp = mpfr_get_exp(t);
      const unsigned twice_a = n + m;
      for (unsigned k = 0; k < m; ++k) {
        mpfr_mul_ui(t, t, static_cast<unsigned long>(m - k) * (n - k), MPFR_RNDN);
        mpfr_div_ui(t, t, static_cast<unsigned long>(k + 1) * (twice_a - 2 * k), MPFR_RNDN);
        mpfr_neg(t, t, MPFR_RNDN);
        mpfr_add(s, s, t, MPFR_RNDN);
        max_exp = std::max<long>(max_exp, mpfr_get_exp(t));
      }
      const long exp_s = mpfr_zero_p(s) ? -prec : mpfr_get_exp(s);
      const long lost = max_exp - exp_s;
      if (prec - lost < keep_bits) {
        ok = false;
        worst_lost = std::max(worst_lost, lost);
        break;
      }
      const int d = static_cast<int>(n - m);
      const double sin_term = (d % 4 == 1) ? 1.0 : -1.0;
      out[m] = mpfr_get_d(s, MPFR_RNDN) / pi * 2.0 * sin_term / d;
    }
    mpfr_clears(t0, t, s, tmp, static_cast<mpfr_ptr>(nullptr));
    if (ok) return;
    prec += worst_lost + keep_bits;
  }
  throw PrecisionError("theta_x_matrix: extended series did not converge");
}

}  // namespace

Eigen::VectorXd HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianOperator::truncation_slack() const {
  const Eigen::VectorXd ev = eigenvalues();
  if (ev.size() == 0) return 0.0;
  return std::max({0.0, -ev.minCoeff(), ev.maxCoeff() - 1.0});
}

Eigenpair top_eigenpair(const Eigen::MatrixXcd& h) {
  if (h.rows() == 0 || h.rows() != h.cols()) throw std::invalid_argument("top_eigenpair: empty or non-square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("top_eigenpair: eigensolver failed");
  const Eigen::Index last = h.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

double max_eigenvalue(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

WCoefficient w_coefficient(unsigned n, unsigned m) {
  const unsigned kmax = std::min(m, n);
  const double a = 0.5 * (static_cast<double>(m) + n);
  std::vector<double> logs(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) {
    logs[k] = (a - k - 1.0) * std::log(2.0) + specfun::log_gamma_half(static_cast<int>(m + n - 2 * k + 2)) -
              std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) - std::lgamma(n - k + 1.0);
  }
  const double lmax = *std::max_element(logs.begin(), logs.end());
  std::vector<double> terms(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) terms[k] = ((k & 1u) ? -1.0 : 1.0) * std::exp(logs[k] - lmax);
  const auto cs = specfun::compensated_sum(terms);
  WCoefficient w;
  w.cancellation = cs.cancellation;
  w.precision_loss = !(cs.cancellation <= kCancellationLimit);
  w.sign = cs.value < 0.0 ? -1 : 1;
  w.log_abs = lmax + std::log(std::abs(cs.value));
  w.value = w.sign * std::exp(w.log_abs);
  return w;
}

double theta_x_element(unsigned n, unsigned m, Precision prec) {
  if (n == m) return 0.5;
  if (((n + m) & 1u) == 0) return 0.0;
  if (prec == Precision::Double) return boundary_element(boundary_values(std::max(n, m)), n, m);
  const int d = static_cast<int>(n) - static_cast<int>(m);
  // (i^d - i^{-d}) / (i d) = 2 sin(pi d / 2) / d; for odd d the sine is +/-1.
  const int dm = ((d % 4) + 4) % 4;
  const double sin_term = dm == 1 ? 1.0 : -1.0;
  return scaled_series_mpfr(n, m) / pi * 2.0 * sin_term / d;
}

Eigen::MatrixXd theta_x_matrix(unsigned N, Precision prec, unsigned threads) {
  const Eigen::Index dim = static_cast<Eigen::Index>(N) + 1;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(dim, dim);
  if (prec == Precision::Double) {
    const auto b = boundary_values(N);
    for (Eigen::Index n = 0; n < dim; ++n)
      for (Eigen::Index m = 0; m <= n; ++m) {
        const double v = boundary_element(b, static_cast<unsigned>(n), static_cast<unsigned>(m));
        r(n, m) = v;
        r(m, n) = v;
      }
    return r;
  }
  // Extended: rows are independent; longer rows first keeps the pool balanced.
  parallel_for(
      static_cast<std::size_t>(dim),
      [&](std::size_t i) {
        const auto n = static_cast<unsigned>(dim - 1 - static_cast<Eigen::Index>(i));
        std::vector<double> row;
        extended_row(n, row);
        for (unsigned m = 0; m <= n; ++m) {
          r(n, m) = row[m];
          r(m, n) = row[m];
        }
      },
      threads);
  return r;
}

HermitianOperator halfplane_combination(const Eigen::MatrixXd& theta_x,
                                        const std::vector<std::pair<double, double>>& phi_and_weight,
                                        double identity_weight) {
  const Eigen::Index dim = theta_x.rows();
  HermitianOperator op;
  op.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const double r = theta_x(n, m);
      if (r == 0.0) continue;
      std::complex<double> c = 0.0;
      for (const auto& [phi, w] : phi_and_weight) c += w * std::polar(1.0, phi * static_cast<double>(n - m));
      op.matrix(n, m) = c * r;
      op.matrix(m, n) = std::conj(c * r);
    }
    double diag = identity_weight;
    for (const auto& pw : phi_and_weight) diag += pw.second * theta_x(n, n);
    op.matrix(n, n) = diag;
  }
  return op;
}

HermitianOperator theta_halfplane(double phi, unsigned N, Precision prec, unsigned threads) {
  return halfplane_combination(theta_x_matrix(N, prec, threads), {{phi, 1.0}});
}

HermitianOperator omega_operator(unsigned N, Precision prec, unsigned threads) {
  return halfplane_combination(theta_x_matrix(N, prec, threads), {{pi / 4, 1.0}, {pi / 2, -1.0}});
}

HermitianOperator triple_theta_operator(unsigned N, Precision prec, unsigned threads) {
  return halfplane_combination(theta_x_matrix(N, prec, threads),
                               {{pi / 4, 1.0}, {0.0, -1.0}, {pi / 2, -1.0}});
}

HermitianOperator theta_neg_x(unsigned N, Precision prec, unsigned threads) {
  return halfplane_combination(theta_x_matrix(N, prec, threads), {{0.0, -1.0}}, 1.0);
}

void check_density_matrix(const Eigen::MatrixXcd& rho, double tol) {
  if (rho.rows() == 0 || rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix: empty or non-square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("density matrix: not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw std::invalid_argument("density matrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("density matrix: not positive semidefinite");
}

MarginalPair state_densities(const Eigen::MatrixXcd& rho, const Grid1D& x_grid, const Grid1D& p_grid) {
  check_density_matrix(rho);
  const auto N = static_cast<unsigned>(rho.rows() - 1);
  // <p|n> = (-i)^n psi_n(p): nu(p) = sum_mn rho_mn i^{n-m} psi_m(p) psi_n(p).
  Eigen::MatrixXcd rho_p = rho;
  for (Eigen::Index m = 0; m < rho.rows(); ++m)
    for (Eigen::Index n = 0; n < rho.cols(); ++n) {
      static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      rho_p(m, n) *= ipow[(((n - m) % 4) + 4) % 4];
    }
  const Eigen::MatrixXd rho_x_re = rho.real();
  const Eigen::MatrixXd rho_p_re = rho_p.real();

  auto density = [&](const Grid1D& g, const Eigen::MatrixXd& re) {
    std::vector<double> out(g.points);
    Eigen::VectorXd v(N + 1);
    for (std::size_t i = 0; i < g.points; ++i) {
      specfun::hermite_functions(N, g.at(i), std::span<double>(v.data(), N + 1));
      out[i] = std::max(0.0, v.dot(re * v));
    }
    return out;
  };

  MarginalPair mp;
  mp.x_grid = x_grid;
  mp.p_grid = p_grid;
  mp.mu = density(x_grid, rho_x_re);
  mp.nu = density(p_grid, rho_p_re);
  return mp;
}

}  // namespace qproj
