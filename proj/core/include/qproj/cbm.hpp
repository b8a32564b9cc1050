#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "qproj/precision.hpp"

namespace qproj::cbm {

// ---------------------------------------------------------------- lower bound

struct VariationalResult {
  unsigned N = 0;
  double lambda_penalty = 0.0;
  double objective = 0.0;  // top eigenvalue of Omega_N + lambda Theta(-X)_N
  double epsilon = 0.0;    // 1 - <psi|Theta(-X)|psi>
  double raw_value = 0.0;  // <psi|Omega|psi>
  double corrected_lower_bound = 0.0;
  Eigen::VectorXcd state;
  // Non-certified diagnostic: <Omega> in the projected state Theta(-X)|psi>,
  // evaluated in a larger truncation.
  std::optional<double> projected_estimate;
};

// raw/(1-eps) - 2 sqrt(eps/(1-eps)) - eps/(1-eps). Throws std::domain_error unless 0 <= eps < 1.
double corrected_bound(double raw, double eps);

VariationalResult lower_bound(unsigned N, double lambda, Precision prec = Precision::Double,
                              unsigned threads = 0);

// Fills result.projected_estimate using a basis of size big_N + 1 (big_N >= N).
void add_projected_estimate(VariationalResult& result, unsigned big_N);

// ---------------------------------------------------------------- upper bound

struct KernelOptions {
  double tol = 1e-10;       // relative tolerance per quadrature panel
  double x_cut = 36.0;      // truncation of the e^{-x} tails
  unsigned max_depth = 12;  // adaptive bisection depth
  double ray_start = 4.0;   // switch point W in w = coth(x) for the oscillatory head
  double max_error = 1e-6;  // blocks with larger quadrature error are flagged
};

// 2x2 block over the (+, -) sector basis at dilation parameter eta.
struct DilationBlock {
  double eta = 0.0;
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  double quad_error = 0.0;
  bool flagged = false;
};

// Quadrant operator x >= 0, p >= 0.
DilationBlock quadrant_block(double eta, const KernelOptions& opt = {});

// Region x p >= k, x <= 0, p <= 0. eps_reg > 0 evaluates the regularized
// diagonal entry; eps_reg == 0 evaluates its exact limit.
DilationBlock bk_kernel(double k, double eta, double eps_reg, const KernelOptions& opt = {});

// Off-diagonal integral J(k, eta) = int_0^inf e^{-i eta x} e^{2ik coth x} / cosh x dx
// by the split real-axis / complex-ray scheme (used by bk_kernel).
std::complex<double> coth_phase_integral(double k, double eta, const KernelOptions& opt = {},
                                         double* error = nullptr);

// Same integral along the ray w = coth x = 1 + i t^2 (independent scheme).
std::complex<double> coth_phase_integral_ray(double k, double eta, const KernelOptions& opt = {},
                                             double* error = nullptr);

using Weights = std::vector<std::pair<double, double>>;  // (k, weight)

Weights paper_weights();
std::vector<double> default_eta_grid();  // [-20, 20] step 0.01

struct ScanRecord {
  double eta = 0.0;
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double quad_error = 0.0;
  bool flagged = false;
};

struct SpectralScanResult {
  std::vector<ScanRecord> records;  // sorted by eta, refinements included
  double inf_lambda_min = 0.0;
  double eta_at_inf = 0.0;
  double sup_lambda_max = 0.0;
  double eta_at_sup = 0.0;
  std::size_t flagged = 0;
};

struct ScanOptions {
  double eps_reg = 1e-3;
  bool include_quadrant = true;  // A term
  bool refine = true;            // x10 refinement around local extrema
  KernelOptions kernel;
  unsigned threads = 0;
};

// A(eta) + sum_k w_k B_k(eta) over the grid; extrema over all evaluated points.
SpectralScanResult tilde_A_scan(const Weights& weights, const std::vector<double>& eta_grid,
                                const ScanOptions& opt = {});

// Assembled block at a single eta.
DilationBlock tilde_A_block(const Weights& weights, double eta, const ScanOptions& opt = {});

// -inf_eta lambda_min.
double upper_bound(const Weights& weights, const std::vector<double>& eta_grid, const ScanOptions& opt = {});

// Extremal eigenvalues of a 2x2 Hermitian matrix.
std::pair<double, double> eig_2x2(const Eigen::Matrix2cd& m);

}  // namespace qproj::cbm
