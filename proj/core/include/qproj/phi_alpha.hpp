#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qproj::phi_alpha {

inline constexpr double kDefaultDelta = 1e-4;
inline constexpr double kConjecturedLimit = 0.0384517;

// Real position kernel (x+y)/(4 pi) sinc((y^2-x^2)/4).
double kernel_value(double x, double y);

// Taylor remainder bound eps(N) of the truncated kernel on [-sqrt(alpha), 0]^2.
double remainder_bound(double alpha, unsigned order);

// Smallest N with eps(N) * sqrt(alpha) <= delta. Throws std::domain_error if delta
// is not in (0, 1) or alpha <= 0.
unsigned choose_order(double alpha, double delta);

// Coefficients f[j][k] of x^j y^k in the order-N truncated kernel, 0 <= j,k <= 4N+1.
std::vector<std::vector<double>> taylor_coefficients(unsigned order);

struct LegendreBasis {
  double alpha = 0.0;
  Eigen::VectorXd gram;  // diagonal of G-hat: sqrt(alpha)/(2n+1)
  Eigen::MatrixXd xhat;  // x P_k = sum_j xhat(j, k) P_j (tridiagonal)
};

// Basis P_n(1 + 2x/sqrt(alpha)), n < dim.
LegendreBasis legendre_basis(double alpha, unsigned dim);

struct PhiResult {
  double alpha = 0.0;
  double phi = 0.0;
  double delta = 0.0;      // certified Taylor error eps*sqrt(alpha)
  unsigned order = 0;      // Taylor order N
  unsigned basis_size = 0; // 4N+2
  unsigned digits = 0;     // working decimal digits of the assembly
};

// Symmetrized G^{-1/2} F-hat G^{-1/2} for the order-N truncation.
Eigen::MatrixXd reduced_matrix(double alpha, unsigned order, unsigned* digits_used = nullptr);

// phi(alpha) within the returned certified delta (<= requested delta).
PhiResult phi(double alpha, double delta = kDefaultDelta);

// Same computation at a forced Taylor order.
PhiResult phi_at_order(double alpha, unsigned order);

struct CurvePoint {
  PhiResult result;
  std::string error;  // empty on success
};

// Evaluates phi on every alpha (parallel), sorted by alpha. Failures are
// recorded per point.
std::vector<CurvePoint> phi_curve(std::vector<double> alphas, double delta = kDefaultDelta,
                                  unsigned threads = 0);

// (2 sqrt 3 - 3) alpha / (24 pi)
double linear_upper_bound(double alpha);

// Two-dimensional generalized eigenproblem behind the linear bound.
struct LinearBoundProblem {
  Eigen::Matrix2d F;  // <psi_j|A_0|psi_k>
  Eigen::Matrix2d G;  // <psi_j|psi_k>
  double lambda = 0.0;
};

LinearBoundProblem linear_bound_problem(double alpha);

// Largest lambda with det(F - lambda G) = 0 for symmetric F and positive definite G.
double generalized_max_eigenvalue_2x2(const Eigen::Matrix2d& F, const Eigen::Matrix2d& G);

struct InverseSqrtFit {
  double r = 0.0;  // intercept
  double s = 0.0;  // coefficient of alpha^{-1/2}
};

// Least-squares fit phi ~ r + s / sqrt(alpha).
InverseSqrtFit fit_inverse_sqrt(const std::vector<double>& alpha, const std::vector<double>& phi);

}  // namespace qproj::phi_alpha
