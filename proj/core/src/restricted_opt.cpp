#include "qproj/restricted_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qproj/number_basis.hpp"

namespace qproj::restricted {

namespace {

using std::numbers::pi;

unsigned truncation(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 1) throw std::invalid_argument("restricted: rho must be square");
  return static_cast<unsigned>(rho.rows() - 1);
}

double trace_product(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  return (rho.cwiseProduct(op.transpose())).sum().real();
}

}  // namespace

SeedResult spectral_seed(unsigned N, Precision prec, unsigned threads) {
  const HermitianOperator op = triple_theta_operator(N, prec, threads);
  const Eigenpair top = top_eigenpair(op.matrix);
  SeedResult s;
  s.state = top.vector;
  s.rho = top.vector * top.vector.adjoint();
  s.bound = top.value;
  s.precision_loss = op.precision_loss;
  return s;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) return v;
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += u[static_cast<std::size_t>(k)];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0).matrix();
}

Eigen::MatrixXcd project_to_density(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("project_to_density: matrix must be square");
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd w = project_to_simplex(es.eigenvalues());
  Eigen::MatrixXcd out = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

Eigen::MatrixXcd random_density_matrix(unsigned N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const Eigen::Index d = N + 1;
  Eigen::MatrixXcd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

double quantum_arrival(const Eigen::MatrixXcd& rho) {
  return trace_product(rho, theta_halfplane(pi / 4, truncation(rho)).matrix);
}

double dual_classical_bound(const Eigen::MatrixXcd& rho) {
  const unsigned N = truncation(rho);
  const Eigen::MatrixXd rx = theta_x_matrix(N);
  return trace_product(rho, halfplane_combination(rx, {{0.0, 1.0}, {pi / 2, 1.0}}).matrix);
}

ObjectiveValue objective_W(const Eigen::MatrixXcd& rho, const classical::OdeOptions& ode) {
  ObjectiveValue v;
  v.quantum = quantum_arrival(rho);
  const auto c = classical::classical_max_gradient(rho, ode, {}, false);
  v.classical = c.p_star;
  v.value = v.quantum - v.classical;
  v.warnings = c.warnings;
  return v;
}

AscentTrace gradient_ascent(const Eigen::MatrixXcd& seed, const AscentOptions& opt) {
  const unsigned N = truncation(seed);
  check_density_matrix(seed);
  if (!(opt.step > 0.0)) throw std::invalid_argument("gradient_ascent: step must be positive");
  const Eigen::MatrixXcd q_grad = theta_halfplane(pi / 4, N).matrix;
  classical::OdeOptions ode;
  ode.dx = opt.ode_dx;

  AscentTrace trace;
  Eigen::MatrixXcd rho = seed;
  auto c = classical::classical_max_gradient(rho, ode);
  double quantum = trace_product(rho, q_grad);
  double objective = quantum - c.p_star;
  trace.records.push_back({0, objective, quantum, c.p_star, 0.0, 0.0, 0.0, true});
  trace.best = rho;
  trace.best_objective = objective;

  for (unsigned it = 1; it <= opt.iters; ++it) {
    const Eigen::MatrixXcd grad = q_grad - c.gradient_matrix;
    const double gnorm = grad.norm();
    AscentRecord rec;
    rec.iteration = it;
    rec.gradient_norm = gnorm;
    if (!std::isfinite(gnorm)) {
      ++trace.gradient_blowups;
      rec.accepted = false;
      rec.objective = objective;
      rec.quantum = quantum;
      rec.classical = c.p_star;
      trace.records.push_back(rec);
      break;
    }
    double eps = opt.step;
    bool accepted = false;
    for (unsigned h = 0; h <= opt.max_halvings; ++h, eps *= 0.5) {
      const Eigen::MatrixXcd raw = rho + eps * grad;
      const Eigen::MatrixXcd next = project_to_density(raw);
      auto cn = classical::classical_max_gradient(next, ode);
      const double qn = trace_product(next, q_grad);
      const double on = qn - cn.p_star;
      if (on >= objective) {
        rec.projection_distance = (next - raw).norm();
        rho = next;
        c = std::move(cn);
        quantum = qn;
        objective = on;
        accepted = true;
        break;
      }
    }
    rec.step = accepted ? eps : 0.0;
    rec.accepted = accepted;
    rec.objective = objective;
    rec.quantum = quantum;
    rec.classical = c.p_star;
    trace.records.push_back(rec);
    if (objective > trace.best_objective) {
      trace.best_objective = objective;
      trace.best = rho;
    }
    if (!accepted) break;
  }
  classical::OdeOptions fine;
  fine.dx = opt.final_dx;
  trace.best_final = objective_W(trace.best, fine);
  return trace;
}

}  // namespace qproj::restricted
