#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "qproj/classical_transport.hpp"
#include "qproj/precision.hpp"

namespace qproj::restricted {

struct SeedResult {
  Eigen::MatrixXcd rho;    // rank-one projector onto the top eigenvector
  Eigen::VectorXcd state;  // top eigenvector
  double bound = 0.0;      // top eigenvalue of Theta(X+P) - Theta(X) - Theta(P) on H_N
  bool precision_loss = false;
};

SeedResult spectral_seed(unsigned N, Precision prec = Precision::Double, unsigned threads = 0);

// Euclidean projection of v onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

// Frobenius-nearest density matrix to the Hermitian part of m.
Eigen::MatrixXcd project_to_density(const Eigen::MatrixXcd& m);

// Random full-rank density matrix (normalized Ginibre product).
Eigen::MatrixXcd random_density_matrix(unsigned N, std::mt19937_64& rng);

// tr(rho Theta(X + P)).
double quantum_arrival(const Eigen::MatrixXcd& rho);

// tr(rho (Theta(X) + Theta(P))): dual upper bound on the classical term.
double dual_classical_bound(const Eigen::MatrixXcd& rho);

struct ObjectiveValue {
  double value = 0.0;
  double quantum = 0.0;
  double classical = 0.0;
  std::vector<std::string> warnings;
};

// quantum_arrival - p*_c at M = dT = 1, a = 0.
ObjectiveValue objective_W(const Eigen::MatrixXcd& rho, const classical::OdeOptions& ode = {});

struct AscentOptions {
  double step = 1e-3;
  unsigned iters = 100;
  double ode_dx = 1e-3;    // classical term during the ascent
  double final_dx = 1e-4;  // re-evaluation of the best iterate
  unsigned max_halvings = 20;
};

struct AscentRecord {
  unsigned iteration = 0;
  double objective = 0.0;
  double quantum = 0.0;
  double classical = 0.0;
  double step = 0.0;
  double projection_distance = 0.0;
  double gradient_norm = 0.0;
  bool accepted = true;
};

struct AscentTrace {
  std::vector<AscentRecord> records;  // records[0] is the seed
  Eigen::MatrixXcd best;
  double best_objective = 0.0;  // at ode_dx
  ObjectiveValue best_final;    // best iterate at final_dx
  std::size_t gradient_blowups = 0;
};

// rho_{k+1} = P(rho_k + eps grad W), halving eps until W does not decrease.
AscentTrace gradient_ascent(const Eigen::MatrixXcd& seed, const AscentOptions& opt = {});

}  // namespace qproj::restricted
