#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qproj/grid.hpp"
#include "qproj/marginals.hpp"
#include "qproj/precision.hpp"

namespace qproj {

// Finite Hermitian matrix in the oscillator number basis |0>..|N>.
struct HermitianOperator {
  Eigen::MatrixXcd matrix;
  bool precision_loss = false;

  Eigen::Index dimension() const { return matrix.rows(); }
  Eigen::VectorXd eigenvalues() const;
  // max(0, -lambda_min, lambda_max - 1): distance of the spectrum from [0, 1].
  double truncation_slack() const;
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXcd vector;
};

// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
Eigenpair top_eigenpair(const Eigen::MatrixXcd& h);
double max_eigenvalue(const Eigen::MatrixXcd& h);

struct WCoefficient {
  double value = 0.0;          // may under/overflow for large indices; see log_abs
  double log_abs = 0.0;        // ln|w|
  int sign = 1;
  double cancellation = 1.0;   // max |term| / |sum|
  bool precision_loss = false; // cancellation above 1e12
};

inline constexpr double kCancellationLimit = 1e12;

// The alternating k-sum defining w_nm, in log space with compensated summation.
WCoefficient w_coefficient(unsigned n, unsigned m);

// <n|Theta(X)|m> = integral over x > 0 of psi_n psi_m.
// Double: closed-form boundary identity. Extended: the w_nm series summed in MPFR
// at a precision sized from the term magnitudes.
double theta_x_element(unsigned n, unsigned m, Precision prec = Precision::Double);

// Real symmetric matrix of <n|Theta(X)|m>, n,m = 0..N.
Eigen::MatrixXd theta_x_matrix(unsigned N, Precision prec = Precision::Double, unsigned threads = 0);

// <n|Theta(cos(phi) X + sin(phi) P)|m> = e^{i phi (n-m)} <n|Theta(X)|m>.
HermitianOperator theta_halfplane(double phi, unsigned N, Precision prec = Precision::Double,
                                  unsigned threads = 0);

// Theta(X+P) - Theta(P).
HermitianOperator omega_operator(unsigned N, Precision prec = Precision::Double, unsigned threads = 0);

// Theta(X+P) - Theta(X) - Theta(P).
HermitianOperator triple_theta_operator(unsigned N, Precision prec = Precision::Double,
                                        unsigned threads = 0);

// Theta(-X) = I - Theta(X).
HermitianOperator theta_neg_x(unsigned N, Precision prec = Precision::Double, unsigned threads = 0);

// Complex combination sum_j c_j * theta_halfplane(phi_j) built from one Theta(X) matrix.
HermitianOperator halfplane_combination(const Eigen::MatrixXd& theta_x,
                                        const std::vector<std::pair<double, double>>& phi_and_weight,
                                        double identity_weight = 0.0);

// Values on a row-major (x outer, p inner) lattice.
struct WignerField {
  Lattice2D grid;
  std::vector<std::complex<double>> values;

  std::complex<double> at(std::size_t ix, std::size_t ip) const {
    return values[ix * grid.p.points + ip];
  }
  std::complex<double> integral() const;  // 2-D trapezoid rule
};

// W_{|m><n|}(x, p) = (1/2pi) integral dy e^{ipy} <x - y/2|m><n|x + y/2>.
WignerField wigner_mn(unsigned n, unsigned m, const Lattice2D& grid);
std::complex<double> wigner_mn_value(unsigned n, unsigned m, double x, double p);

// Wigner function of the pure state sum_n c_n |n>, by trapezoid quadrature of
// (1/pi) int du e^{2ipu} psi(x - u) psi*(x + u) with step du.
WignerField wigner_pure_state(const Eigen::VectorXcd& c, const Lattice2D& grid, double du = 0.01);

// Default lattice for an operator on H_N: [-L, L]^2 with L = sqrt(2N)+5, 401 points.
Lattice2D default_wigner_lattice(unsigned N);

// Throws std::invalid_argument unless rho is Hermitian, PSD and unit trace within tol.
void check_density_matrix(const Eigen::MatrixXcd& rho, double tol = 1e-8);

// Position and momentum densities of rho on the given lattices (M = dT = 1, a = 0).
MarginalPair state_densities(const Eigen::MatrixXcd& rho, const Grid1D& x_grid, const Grid1D& p_grid);

}  // namespace qproj
