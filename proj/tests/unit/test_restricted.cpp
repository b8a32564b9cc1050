#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "qproj/classical_transport.hpp"
#include "qproj/number_basis.hpp"
#include "qproj/restricted_opt.hpp"

using namespace qproj;
using namespace qproj::restricted;

namespace {

double frob_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a.adjoint() * b).trace().real(); }

}  // namespace

TEST_CASE("spectral seed") {
  CHECK(spectral_seed(0).bound == doctest::Approx(-0.5));
  const auto s = spectral_seed(30);
  CHECK(s.bound > 0.0);
  CHECK(s.rho.trace().real() == doctest::Approx(1.0));
  CHECK((s.rho * s.rho - s.rho).norm() < 1e-12);
  const auto T = triple_theta_operator(30).matrix;
  CHECK(s.state.dot(T * s.state).real() == doctest::Approx(s.bound).epsilon(1e-12));
}

TEST_CASE("spectral seed bound at N = 170") {
  CHECK(std::abs(spectral_seed(170).bound - 0.1113) < 5e-4);
}

TEST_CASE("simplex projection") {
  Eigen::VectorXd v(3);
  v << 0.2, 0.3, 0.5;
  CHECK((project_to_simplex(v) - v).norm() < 1e-15);
  v << 2.0, 0.0, 0.0;
  CHECK(project_to_simplex(v)(0) == doctest::Approx(1.0));
  v << 0.0, 0.0, 0.0;
  for (int i = 0; i < 3; ++i) CHECK(project_to_simplex(v)(i) == doctest::Approx(1.0 / 3.0));
  // Brute force over a fine simplex lattice in 3 dimensions.
  gen::Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd w(3);
    for (int i = 0; i < 3; ++i) w(i) = rng.uniform(-1, 2);
    const auto p = project_to_simplex(w);
    double best = 1e300;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; i + j <= 400; ++j) {
        Eigen::VectorXd q(3);
        q << i / 400.0, j / 400.0, (400 - i - j) / 400.0;
        best = std::min(best, (q - w).norm());
      }
    CHECK((p - w).norm() <= best + 1e-12);
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(p.minCoeff() >= 0.0);
  }
}

TEST_CASE("density projection: idempotence, invariants and fixed points (property)") {
  gen::Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = rng.integer(1, 12);
    const auto m = gen::hermitian(rng, n, rng.uniform(0.1, 3.0));
    const auto p = project_to_density(m);
    CHECK_NOTHROW(check_density_matrix(p, 1e-10));
    CHECK((project_to_density(p) - p).norm() < 1e-12);
    const auto rho = gen::density(rng, n);
    CHECK((project_to_density(rho) - rho).norm() < 1e-12);
  }
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 2.0;
  const auto pd = project_to_density(d);
  CHECK(pd(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(pd(1, 1)) < 1e-15);
  const auto pz = project_to_density(Eigen::MatrixXcd::Zero(4, 4));
  CHECK((pz - 0.25 * Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("density projection is non-expansive (property)") {
  gen::Rng rng(15);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = rng.integer(1, 10);
    const auto a = gen::hermitian(rng, n);
    const auto b = gen::hermitian(rng, n);
    CHECK((project_to_density(a) - project_to_density(b)).norm() <= (a - b).norm() + 1e-12);
  }
}

TEST_CASE("density projection satisfies the variational optimality condition") {
  // P(m) is the projection iff <m - P, Z - P> <= 0 for every density matrix Z.
  gen::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const auto m = gen::hermitian(rng, 3);
    const auto p = project_to_density(m);
    for (int k = 0; k < 50; ++k) {
      const auto z = gen::density(rng, 3, rng.integer(1, 3));
      CHECK(frob_inner(m - p, z - p) <= 1e-12);
    }
  }
}

TEST_CASE("random density matrices are valid and full rank") {
  std::mt19937_64 eng(3);
  const auto rho = random_density_matrix(7, eng);
  CHECK_NOTHROW(check_density_matrix(rho));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("arrival terms on simple states") {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(5, 5);
  g(0, 0) = 1.0;
  CHECK(quantum_arrival(g) == doctest::Approx(0.5));
  CHECK(dual_classical_bound(g) == doctest::Approx(1.0));
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(8, 8) / 8.0;
  CHECK(quantum_arrival(mixed) == doctest::Approx(0.5));
}

TEST_CASE("objective decomposes and respects the dual bound (property)") {
  gen::Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const auto rho = gen::density(rng, 6, rng.integer(1, 6));
    classical::OdeOptions ode;
    ode.dx = 1e-3;
    const auto w = objective_W(rho, ode);
    CHECK(w.value == doctest::Approx(w.quantum - w.classical).epsilon(1e-14));
    CHECK(w.quantum == doctest::Approx(quantum_arrival(rho)).epsilon(1e-14));
    CHECK(w.classical <= dual_classical_bound(rho) + 1e-3);
  }
}

TEST_CASE("classical term exceeds the independent coupling bound") {
  gen::Rng rng(19);
  const auto rho = gen::density(rng, 5);
  const Grid1D g = Grid1D::with_step(-12, 12, 1e-3);
  const auto mp = state_densities(rho, g, g);
  CHECK(objective_W(rho).classical >= classical::independent_coupling_bound(mp) - 1e-3);
}

TEST_CASE("seed state saturates the dual bound") {
  const auto s = spectral_seed(30);
  const auto w = objective_W(s.rho);
  CHECK(std::abs(w.classical - dual_classical_bound(s.rho)) < 5e-3);
  CHECK(std::abs(w.value - s.bound) < 5e-3);
}

TEST_CASE("gradient ascent from a random start improves and never leaves the state space") {
  std::mt19937_64 eng(42);
  const auto start = random_density_matrix(6, eng);
  AscentOptions opt;
  opt.iters = 15;
  opt.step = 0.05;
  const auto tr = gradient_ascent(start, opt);
  REQUIRE(!tr.records.empty());
  CHECK(tr.records.front().iteration == 0);
  double prev = -1e300;
  for (const auto& r : tr.records) {
    if (!r.accepted) continue;
    CHECK(r.objective >= prev - 1e-12);
    CHECK(r.objective == doctest::Approx(r.quantum - r.classical).epsilon(1e-12));
    prev = r.objective;
  }
  CHECK(tr.best_objective >= tr.records.front().objective);
  CHECK_NOTHROW(check_density_matrix(tr.best, 1e-9));
}

TEST_CASE("zero iterations returns the evaluated seed") {
  const auto s = spectral_seed(8);
  AscentOptions opt;
  opt.iters = 0;
  const auto tr = gradient_ascent(s.rho, opt);
  CHECK(tr.records.size() == 1);
  CHECK((tr.best - s.rho).norm() < 1e-12);
}
