#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qproj/precision.hpp"

namespace qproj::cli {

enum ExitCode : int { kOk = 0, kPrecisionFailure = 1, kInvalidInput = 2 };

struct GlobalConfig {
  std::filesystem::path out_dir = ".";
  Precision precision = Precision::Double;
  unsigned threads = 0;
  std::uint64_t seed = 20240917;
};

struct PhiCurveConfig {
  double alpha_max = 100.0;
  unsigned points = 1000;
  double delta = 1e-4;
  double fit_min = 25.0;  // inverse-square-root fit window [fit_min, alpha_max]
  bool svg = true;
};

struct CbmConfig {
  unsigned N = 1000;
  double lambda = 2500.0;
  double eps_reg = 1e-3;
  double eta_min = -20.0;
  double eta_max = 20.0;
  double eta_step = 0.01;
  std::string weights = "0:0.7673,0.1:-0.8767,0.5:0.09895";
  bool skip_lower = false;
  bool skip_upper = false;
  bool no_refine = false;
  unsigned projected_N = 0;  // > N enables the non-certified projected estimate
};

struct RestrictedConfig {
  unsigned N = 170;
  double step = 1e-3;
  unsigned iters = 0;
  double ode_dx = 1e-3;
  double final_dx = 1e-4;
  bool random_start = false;
  bool evaluate = false;  // evaluate W at the seed even for large N
  bool export_operator = false;
};

struct ClassicalConfig {
  std::filesystem::path mu_path;
  std::filesystem::path nu_path;
  double a = 0.0;
  double M = 1.0;
  double dT = 1.0;
  double dx = 1e-4;
  double lo = -40.0;
  double hi = 40.0;
  std::size_t oracle_samples = 0;
};

struct RocketConfig {
  std::filesystem::path schedule_path;
  double alpha_cap = 100.0;
  double delta = 1e-4;
};

struct WignerConfig {
  std::string state = "seed";  // number | seed | cbm
  unsigned N = 30;
  unsigned n = 0;
  unsigned m = 0;
  double lambda = 2500.0;
  unsigned points = 201;
  double extent = 0.0;  // 0: sqrt(2N) + 5
  double du = 0.01;
};

int run_phi_curve(const GlobalConfig& g, const PhiCurveConfig& c);
int run_cbm(const GlobalConfig& g, const CbmConfig& c);
int run_restricted(const GlobalConfig& g, const RestrictedConfig& c);
int run_classical(const GlobalConfig& g, const ClassicalConfig& c);
int run_rocket(const GlobalConfig& g, const RocketConfig& c);
int run_wigner(const GlobalConfig& g, const WignerConfig& c);

}  // namespace qproj::cli
