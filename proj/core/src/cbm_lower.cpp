#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qproj/cbm.hpp"
#include "qproj/number_basis.hpp"

namespace qproj::cbm {

double corrected_bound(double raw, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("corrected_bound: epsilon must lie in [0, 1)");
  const double r = eps / (1.0 - eps);
  return raw / (1.0 - eps) - 2.0 * std::sqrt(r) - r;
}

VariationalResult lower_bound(unsigned N, double lambda, Precision prec, unsigned threads) {
  if (!(lambda > 0.0)) throw std::domain_error("lower_bound: lambda must be positive");
  using std::numbers::pi;
  const Eigen::MatrixXd rx = theta_x_matrix(N, prec, threads);
  const HermitianOperator omega = halfplane_combination(rx, {{pi / 4, 1.0}, {pi / 2, -1.0}});
  const HermitianOperator neg_x = halfplane_combination(rx, {{0.0, -1.0}}, 1.0);

  const Eigenpair top = top_eigenpair(omega.matrix + lambda * neg_x.matrix);
  VariationalResult r;
  r.N = N;
  r.lambda_penalty = lambda;
  r.objective = top.value;
  r.state = top.vector;
  r.raw_value = top.vector.dot(omega.matrix * top.vector).real();
  r.epsilon = 1.0 - top.vector.dot(neg_x.matrix * top.vector).real();
  if (r.epsilon >= 1.0) throw std::domain_error("lower_bound: leakage epsilon >= 1; increase lambda");
  r.corrected_lower_bound = corrected_bound(r.raw_value, std::max(0.0, r.epsilon));
  return r;
}

void add_projected_estimate(VariationalResult& result, unsigned big_N) {
  using std::numbers::pi;
  if (big_N < result.N) throw std::invalid_argument("add_projected_estimate: big_N < N");
  const Eigen::MatrixXd rx = theta_x_matrix(big_N);
  const Eigen::Index small = result.state.size();
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(big_N + 1);
  padded.head(small) = result.state;
  // Theta(-X) |psi>, truncated to the big basis.
  const Eigen::VectorXcd projected = padded - rx.cast<std::complex<double>>() * padded;
  const HermitianOperator omega = halfplane_combination(rx, {{pi / 4, 1.0}, {pi / 2, -1.0}});
  const double norm2 = projected.squaredNorm();
  result.projected_estimate = projected.dot(omega.matrix * projected).real() / norm2;
}

}  // namespace qproj::cbm
