#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qproj/grid.hpp"
#include "qproj/marginals.hpp"

namespace qproj::classical {

struct RescaledDensity {
  Grid1D y_grid;
  std::vector<double> density;
};

// y = p dT / M with density (M/dT) nu(M y / dT).
RescaledDensity rescale_momentum(const Grid1D& p_grid, const std::vector<double>& nu, double M, double dT);

struct OdeOptions {
  double dx = 1e-4;
  double lo = -40.0;
  double hi = 40.0;
  double boundary_warn = 1e-8;
  double degenerate_gap = 1e-10;
};

struct ClassicalResult {
  double p_star = 0.0;
  double dx = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> warnings;
};

// Maximum classical arrival probability by the forward-Euler sweep.
ClassicalResult classical_max(const MarginalPair& marginals, const OdeOptions& opt = {});

// Sweep on pre-sampled arrays: mu_i = mu(x_i), nut_i = nu~(a - x_i), x_i = lo + i dx.
double sweep(const std::vector<double>& mu, const std::vector<double>& nut, double dx);

// Fraction of x_i matched to distinct y_j with x_i + y_j >= a (both inputs sorted ascending).
double greedy_matching_oracle(const std::vector<double>& x_sorted, const std::vector<double>& y_sorted, double a);

// n stratified samples F^{-1}((i + 1/2)/n) of the piecewise-linear density, ascending.
std::vector<double> quantile_samples(const Grid1D& grid, const std::vector<double>& density, std::size_t n);

// Lower bound: int int mu(x) nu~(y) Theta(x + y - a).
double independent_coupling_bound(const MarginalPair& marginals);

// Dual upper bound int mu Theta(x - t) + int nu~ Theta(y - (a - t)).
double threshold_bound(const MarginalPair& marginals, double t);

// Minimum of threshold_bound over the x-grid nodes.
double best_threshold_bound(const MarginalPair& marginals);

// Parameters of a density matrix on H_N: rho_mm (m = 0..N), then Re rho_mn and
// Im rho_mn for m < n in row-major order.
std::size_t parameter_count(unsigned N);
Eigen::VectorXd to_parameters(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd from_parameters(const Eigen::VectorXd& theta, unsigned N);

// d/d(theta) of a scalar f(rho) mapped to the Hermitian matrix G with
// <G, d rho>_F = df.
Eigen::MatrixXcd gradient_to_matrix(const Eigen::VectorXd& grad, unsigned N);

struct GradientResult {
  double p_star = 0.0;
  Eigen::VectorXd gradient;  // d p_star / d theta
  Eigen::MatrixXcd gradient_matrix;
  std::size_t landings = 0;             // points where q returns to zero
  std::size_t degenerate_landings = 0;  // with |mu - nu~| below the gap
  std::vector<std::string> warnings;
};

struct StateScenario {
  double M = 1.0;
  double dT = 1.0;
  double a = 0.0;
};

// p*_c of the number-basis state rho and its gradient (forward mode through
// the discrete sweep). rho need not be positive: densities are evaluated as
// the quadratic forms they define.
GradientResult classical_max_gradient(const Eigen::MatrixXcd& rho, const OdeOptions& opt = {},
                                      const StateScenario& sc = {}, bool with_gradient = true);

// p*_c of rho without the gradient.
double classical_max_state(const Eigen::MatrixXcd& rho, const OdeOptions& opt = {}, const StateScenario& sc = {});

}  // namespace qproj::classical
