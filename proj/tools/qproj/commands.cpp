#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "output.hpp"
#include "qproj/cbm.hpp"
#include "qproj/classical_transport.hpp"
#include "qproj/number_basis.hpp"
#include "qproj/phi_alpha.hpp"
#include "qproj/restricted_opt.hpp"
#include "qproj/scenarios.hpp"

namespace qproj::cli {

namespace fs = std::filesystem;

namespace {

fs::path prepare(const GlobalConfig& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return g.out_dir / name;
}

cbm::Weights parse_weights(const std::string& text) {
  cbm::Weights w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("weights: expected k:w, got '" + item + "'");
    try {
      const double k = std::stod(item.substr(0, colon));
      const double v = std::stod(item.substr(colon + 1));
      if (k < 0.0) throw std::invalid_argument("weights: k must be non-negative");
      w.emplace_back(k, v);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("weights: cannot parse '" + item + "'");
    }
  }
  return w;
}

Grid1D uniform_grid(const std::vector<double>& x, const std::string& what) {
  const Grid1D g(x.front(), x.back(), x.size());
  const double h = g.step();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - g.at(i)) > 1e-6 * h)
      throw std::invalid_argument(what + ": coordinates must be uniformly spaced and increasing");
  return g;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

int run_phi_curve(const GlobalConfig& g, const PhiCurveConfig& c) {
  if (!(c.alpha_max > 0.0)) throw std::invalid_argument("phi-curve: empty alpha range (alpha-max must be positive)");
  if (c.points == 0) throw std::invalid_argument("phi-curve: points must be positive");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw std::invalid_argument("phi-curve: delta must lie in (0, 1)");
  std::vector<double> alphas(c.points);
  for (unsigned i = 0; i < c.points; ++i) alphas[i] = c.alpha_max * (i + 1.0) / c.points;
  const auto curve = phi_alpha::phi_curve(alphas, c.delta, g.threads);

  CsvWriter csv(prepare(g, "phi_curve.csv"), {"alpha", "phi", "delta", "N_used", "linear_bound", "conjecture"});
  std::vector<double> fa, fp;
  Series s_phi{"phi(alpha)", {}, {}}, s_lin{"linear bound", {}, {}};
  std::size_t failures = 0, monotone_violations = 0, linear_violations = 0;
  json errors = json::array();
  double prev = -INFINITY;
  for (const auto& pt : curve) {
    const auto& r = pt.result;
    if (!pt.error.empty()) {
      ++failures;
      errors.push_back({{"alpha", r.alpha}, {"error", pt.error}});
      continue;
    }
    const double lin = phi_alpha::linear_upper_bound(r.alpha);
    csv.row({r.alpha, r.phi, r.delta, static_cast<double>(r.order), lin, phi_alpha::kConjecturedLimit});
    if (r.phi < prev - 2.0 * c.delta) ++monotone_violations;
    if (r.phi > lin + c.delta) ++linear_violations;
    prev = std::max(prev, r.phi);
    if (r.alpha >= c.fit_min) {
      fa.push_back(r.alpha);
      fp.push_back(r.phi);
    }
    s_phi.x.push_back(r.alpha);
    s_phi.y.push_back(r.phi);
    if (lin <= 0.05) {
      s_lin.x.push_back(r.alpha);
      s_lin.y.push_back(lin);
    }
  }
  csv.save();

  json body = {{"command", "phi-curve"},
               {"alpha_max", c.alpha_max},
               {"points", c.points},
               {"delta", c.delta},
               {"csv", "phi_curve.csv"},
               {"failures", failures},
               {"errors", errors},
               {"monotonicity_violations", monotone_violations},
               {"linear_bound_violations", linear_violations},
               {"conjecture", phi_alpha::kConjecturedLimit}};
  if (fa.size() >= 2) {
    const auto fit = phi_alpha::fit_inverse_sqrt(fa, fp);
    body["fit"] = {{"alpha_min", c.fit_min}, {"r", fit.r}, {"s", fit.s}};
  }
  write_json(prepare(g, "phi_curve.json"), body);
  if (c.svg)
    write_svg_plot(prepare(g, "phi_curve.svg"), "phi(alpha)", "alpha", "phi", {s_phi, s_lin},
                   {{"0.0384517", phi_alpha::kConjecturedLimit}});
  std::cout << "phi-curve: " << curve.size() - failures << " points written to " << csv.path().string() << '\n';
  return failures ? kPrecisionFailure : kOk;
}

int run_cbm(const GlobalConfig& g, const CbmConfig& c) {
  if (c.skip_lower && c.skip_upper) throw std::invalid_argument("cbm: nothing to do");
  json body = {{"command", "cbm"}, {"conjecture", phi_alpha::kConjecturedLimit}};
  double lower = -INFINITY, upper = INFINITY;

  if (!c.skip_lower) {
    if (!(c.lambda > 0.0)) throw std::invalid_argument("cbm: lambda must be positive");
    auto r = cbm::lower_bound(c.N, c.lambda, g.precision, g.threads);
    if (c.projected_N > c.N) cbm::add_projected_estimate(r, c.projected_N);
    lower = r.corrected_lower_bound;
    body["lower_bound"] = {{"value", r.corrected_lower_bound},
                           {"raw_value", r.raw_value},
                           {"epsilon", r.epsilon},
                           {"objective", r.objective},
                           {"parameters", {{"N", c.N}, {"lambda", c.lambda}, {"precision", std::string(to_string(g.precision))}}}};
    if (r.projected_estimate) body["lower_bound"]["projected_estimate"] = {{"value", *r.projected_estimate},
                                                                           {"N", c.projected_N},
                                                                           {"certified", false}};
    std::cout << "cbm: lower bound " << format_number(lower) << '\n';
  }
  if (!c.skip_upper) {
    if (!(c.eta_step > 0.0) || !(c.eta_max >= c.eta_min)) throw std::invalid_argument("cbm: bad eta grid");
    if (c.eps_reg < 0.0) throw std::invalid_argument("cbm: eps-reg must be non-negative");
    const auto weights = parse_weights(c.weights);
    std::vector<double> etas;
    const auto n = static_cast<std::size_t>(std::floor((c.eta_max - c.eta_min) / c.eta_step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) etas.push_back(c.eta_min + c.eta_step * static_cast<double>(i));
    cbm::ScanOptions opt;
    opt.eps_reg = c.eps_reg;
    opt.refine = !c.no_refine;
    opt.threads = g.threads;
    const auto scan = cbm::tilde_A_scan(weights, etas, opt);
    upper = -scan.inf_lambda_min;

    CsvWriter csv(prepare(g, "cbm_scan.csv"), {"eta", "lambda_min", "lambda_max", "quadrature_error", "flagged"});
    Series lo{"lambda_min", {}, {}}, hi{"lambda_max", {}, {}};
    for (const auto& r : scan.records) {
      csv.row({r.eta, r.lambda_min, r.lambda_max, r.quad_error, r.flagged ? 1.0 : 0.0});
      lo.x.push_back(r.eta);
      lo.y.push_back(r.lambda_min);
      hi.x.push_back(r.eta);
      hi.y.push_back(r.lambda_max);
    }
    csv.save();
    write_svg_plot(prepare(g, "cbm_scan.svg"), "dilation-block spectrum", "eta", "eigenvalue", {lo, hi},
                   {{"0", 0.0}});
    json w = json::array();
    for (const auto& [k, v] : weights) w.push_back({{"k", k}, {"weight", v}});
    body["upper_bound"] = {{"value", upper},
                           {"inf_lambda_min", scan.inf_lambda_min},
                           {"eta_at_inf", scan.eta_at_inf},
                           {"sup_lambda_max", scan.sup_lambda_max},
                           {"eta_at_sup", scan.eta_at_sup},
                           {"flagged_points", scan.flagged},
                           {"scan_file", "cbm_scan.csv"},
                           {"parameters",
                            {{"weights", w},
                             {"eps_reg", c.eps_reg},
                             {"eta_min", c.eta_min},
                             {"eta_max", c.eta_max},
                             {"eta_step", c.eta_step},
                             {"refine", !c.no_refine}}}};
    std::cout << "cbm: upper bound " << format_number(upper) << " (" << scan.flagged << " flagged points)\n";
  }
  const bool consistent = !(lower > upper);
  body["consistent"] = consistent;
  write_json(prepare(g, "cbm.json"), body);
  if (!consistent) {
    std::cerr << "cbm: lower bound exceeds upper bound\n";
    return kPrecisionFailure;
  }
  return kOk;
}

int run_restricted(const GlobalConfig& g, const RestrictedConfig& c) {
  if (c.N > 400 && g.precision == Precision::Double)
    std::cerr << "note: N > 400; the series form of the matrix elements needs --precision extended, "
                 "the default route uses the exact closed form in double precision\n";
  const auto seed = restricted::spectral_seed(c.N, g.precision, g.threads);
  json body = {{"command", "restricted"},
               {"N", c.N},
               {"precision", std::string(to_string(g.precision))},
               {"seed_bound", seed.bound},
               {"precision_loss", seed.precision_loss}};
  std::cout << "restricted: seed bound " << format_number(seed.bound) << '\n';

  if (c.export_operator) {
    const auto op = triple_theta_operator(c.N, g.precision, g.threads);
    CsvWriter csv(prepare(g, "triple_theta.csv"), {"row", "col", "re", "im"});
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
      for (Eigen::Index j = 0; j < op.matrix.cols(); ++j)
        csv.row({static_cast<double>(i), static_cast<double>(j), op.matrix(i, j).real(), op.matrix(i, j).imag()});
    csv.save();
    body["operator_file"] = "triple_theta.csv";
  }

  Eigen::MatrixXcd start = seed.rho;
  if (c.random_start) {
    std::mt19937_64 rng(g.seed);
    start = restricted::random_density_matrix(c.N, rng);
  }
  if (c.iters > 0) {
    restricted::AscentOptions opt;
    opt.step = c.step;
    opt.iters = c.iters;
    opt.ode_dx = c.ode_dx;
    opt.final_dx = c.final_dx;
    const auto trace = restricted::gradient_ascent(start, opt);
    CsvWriter csv(prepare(g, "restricted_trace.csv"),
                  {"iteration", "objective", "quantum", "classical", "step", "projection_distance", "gradient_norm",
                   "accepted"});
    for (const auto& r : trace.records)
      csv.row({static_cast<double>(r.iteration), r.objective, r.quantum, r.classical, r.step, r.projection_distance,
               r.gradient_norm, r.accepted ? 1.0 : 0.0});
    csv.save();
    body["start"] = c.random_start ? "random" : "spectral";
    body["iterations"] = trace.records.size() - 1;
    body["initial_W"] = trace.records.front().objective;
    body["best_W"] = trace.best_final.value;
    body["best_W_quantum"] = trace.best_final.quantum;
    body["best_W_classical"] = trace.best_final.classical;
    body["gradient_blowups"] = trace.gradient_blowups;
    body["trace_file"] = "restricted_trace.csv";
    std::cout << "restricted: best W " << format_number(trace.best_final.value) << '\n';
  } else if (c.evaluate || c.N <= 60) {
    classical::OdeOptions ode;
    ode.dx = c.final_dx;
    const auto w = restricted::objective_W(start, ode);
    body["iterations"] = 0;
    body["best_W"] = w.value;
    body["best_W_quantum"] = w.quantum;
    body["best_W_classical"] = w.classical;
    body["dual_classical_bound"] = restricted::dual_classical_bound(start);
    body["trace_file"] = nullptr;
  } else {
    body["iterations"] = 0;
    body["best_W"] = nullptr;
    body["trace_file"] = nullptr;
  }
  write_json(prepare(g, "restricted.json"), body);
  return seed.precision_loss ? kPrecisionFailure : kOk;
}

int run_classical(const GlobalConfig& g, const ClassicalConfig& c) {
  if (c.mu_path.empty() || c.nu_path.empty()) throw std::invalid_argument("classical: --mu and --nu are required");
  const auto tm = read_two_column_csv(c.mu_path);
  const auto tn = read_two_column_csv(c.nu_path);
  MarginalPair mp;
  mp.x_grid = uniform_grid(tm.x, c.mu_path.string());
  mp.p_grid = uniform_grid(tn.x, c.nu_path.string());
  mp.mu = tm.y;
  mp.nu = tn.y;
  mp.M = c.M;
  mp.dT = c.dT;
  mp.a = c.a;
  mp.validate(1e-3);

  classical::OdeOptions opt;
  opt.dx = c.dx;
  opt.lo = c.lo;
  opt.hi = c.hi;
  const auto r = classical::classical_max(mp, opt);
  json body = {{"command", "classical"},
               {"p_star", r.p_star},
               {"dx", r.dx},
               {"range", {r.lo, r.hi}},
               {"warnings", r.warnings},
               {"scenario", {{"M", c.M}, {"dT", c.dT}, {"a", c.a}}},
               {"independent_coupling_bound", classical::independent_coupling_bound(mp)},
               {"threshold_bound", classical::best_threshold_bound(mp)}};
  if (c.oracle_samples > 0) {
    const auto y = classical::rescale_momentum(mp.p_grid, mp.nu, mp.M, mp.dT);
    const auto xs = classical::quantile_samples(mp.x_grid, mp.mu, c.oracle_samples);
    const auto ys = classical::quantile_samples(y.y_grid, y.density, c.oracle_samples);
    const double frac = classical::greedy_matching_oracle(xs, ys, mp.a);
    body["oracle"] = {{"samples", c.oracle_samples}, {"fraction", frac}, {"difference", r.p_star - frac}};
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  write_json(prepare(g, "classical.json"), body);
  std::cout << "classical: p* = " << format_number(r.p_star) << '\n';
  return kOk;
}

int run_rocket(const GlobalConfig& g, const RocketConfig& c) {
  std::ifstream f(c.schedule_path);
  if (!f) throw std::invalid_argument("rocket: cannot read " + c.schedule_path.string());
  scenarios::RocketSchedule s;
  try {
    const json j = json::parse(f);
    s.M = j.at("M").get<double>();
    s.l = j.at("l").get<double>();
    s.lambda = j.value("lambda", 0.0);
    s.t_final = j.at("t_final").get<double>();
    for (const auto& b : j.value("burns", json::array())) s.burns.push_back({b.at("t").get<double>(), b.at("m").get<double>()});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("rocket: invalid schedule JSON: ") + e.what());
  }
  scenarios::RocketOptions opt;
  opt.alpha_cap = c.alpha_cap;
  opt.delta = c.delta;
  const auto r = scenarios::rocket_reduce(s, opt);
  json body = {{"command", "rocket"},
               {"c", vector_json(r.c)},
               {"d", vector_json(r.d)},
               {"beta", r.beta},
               {"L_plus", r.L_plus},
               {"L_minus", r.L_minus},
               {"alpha_eff", number_or_null(r.alpha_eff)},
               {"bound", r.bound},
               {"bound_source", r.beta == 0.0 ? "commuting" : (r.bound_from_curve ? "phi_curve" : "cbm_upper_bound")}};
  write_json(prepare(g, "rocket.json"), body);
  std::cout << "rocket: bound " << format_number(r.bound) << '\n';
  return kOk;
}

int run_wigner(const GlobalConfig& g, const WignerConfig& c) {
  if (c.points < 2) throw std::invalid_argument("wigner: need at least 2 points");
  const double L = c.extent > 0.0 ? c.extent : std::sqrt(2.0 * std::max(c.N, std::max(c.n, c.m))) + 5.0;
  const Lattice2D grid{Grid1D(-L, L, c.points), Grid1D(-L, L, c.points)};
  WignerField field;
  bool complex_values = false;
  json body = {{"command", "wigner"}, {"state", c.state}, {"points", c.points}, {"extent", L}};
  if (c.state == "number") {
    field = wigner_mn(c.n, c.m, grid);
    complex_values = c.n != c.m;
    body["n"] = c.n;
    body["m"] = c.m;
  } else if (c.state == "seed") {
    const auto s = restricted::spectral_seed(c.N, g.precision, g.threads);
    field = wigner_pure_state(s.state, grid, c.du);
    body["N"] = c.N;
    body["seed_bound"] = s.bound;
  } else if (c.state == "cbm") {
    const auto r = cbm::lower_bound(c.N, c.lambda, g.precision, g.threads);
    field = wigner_pure_state(r.state, grid, c.du);
    body["N"] = c.N;
    body["lambda"] = c.lambda;
    body["corrected_lower_bound"] = r.corrected_lower_bound;
  } else {
    throw std::invalid_argument("wigner: state must be number, seed or cbm");
  }
  std::vector<std::string> header{"x", "p"};
  if (complex_values) {
    header.push_back("re");
    header.push_back("im");
  } else {
    header.push_back("value");
  }
  CsvWriter csv(prepare(g, "wigner.csv"), header);
  for (std::size_t i = 0; i < grid.x.points; ++i)
    for (std::size_t j = 0; j < grid.p.points; ++j) {
      const auto v = field.at(i, j);
      if (complex_values)
        csv.row({grid.x.at(i), grid.p.at(j), v.real(), v.imag()});
      else
        csv.row({grid.x.at(i), grid.p.at(j), v.real()});
    }
  csv.save();
  body["integral"] = field.integral().real();
  body["grid_file"] = "wigner.csv";
  write_json(prepare(g, "wigner.json"), body);
  std::cout << "wigner: " << grid.x.points * grid.p.points << " samples written\n";
  return kOk;
}

}  // namespace qproj::cli
