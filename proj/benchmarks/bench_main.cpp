#include <benchmark/benchmark.h>

#include <random>

#include "qproj/cbm.hpp"
#include "qproj/classical_transport.hpp"
#include "qproj/number_basis.hpp"
#include "qproj/phi_alpha.hpp"
#include "qproj/restricted_opt.hpp"

using namespace qproj;

static void BM_ThetaXMatrixDouble(benchmark::State& s) {
  const auto N = static_cast<unsigned>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(theta_x_matrix(N, Precision::Double, 1));
}
BENCHMARK(BM_ThetaXMatrixDouble)->Arg(170)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_ThetaXMatrixExtended(benchmark::State& s) {
  const auto N = static_cast<unsigned>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(theta_x_matrix(N, Precision::Extended, 1));
}
BENCHMARK(BM_ThetaXMatrixExtended)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_Phi(benchmark::State& s) {
  const double alpha = static_cast<double>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(phi_alpha::phi(alpha, 1e-4));
}
BENCHMARK(BM_Phi)->Arg(1)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> mu(n), nu(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = u(rng);
    nu[i] = u(rng);
  }
  for (auto _ : s) benchmark::DoNotOptimize(classical::sweep(mu, nu, 1e-4));
  s.SetItemsProcessed(static_cast<std::int64_t>(s.iterations()) * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Sweep)->Arg(800001);

static void BM_StateGradient(benchmark::State& s) {
  std::mt19937_64 rng(2);
  const auto rho = restricted::random_density_matrix(static_cast<unsigned>(s.range(0)), rng);
  classical::OdeOptions opt;
  opt.dx = 1e-3;
  for (auto _ : s) benchmark::DoNotOptimize(classical::classical_max_gradient(rho, opt));
}
BENCHMARK(BM_StateGradient)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_KernelBlock(benchmark::State& s) {
  const auto w = cbm::paper_weights();
  cbm::ScanOptions opt;
  double eta = -5.0;
  for (auto _ : s) {
    benchmark::DoNotOptimize(cbm::tilde_A_block(w, eta, opt));
    eta += 0.01;
    if (eta > 5.0) eta = -5.0;
  }
}
BENCHMARK(BM_KernelBlock)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
