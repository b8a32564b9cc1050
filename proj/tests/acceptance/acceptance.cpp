// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "generators.hpp"
#include "qproj/cbm.hpp"
#include "qproj/classical_transport.hpp"
#include "qproj/number_basis.hpp"
#include "qproj/phi_alpha.hpp"
#include "qproj/restricted_opt.hpp"
#include "qproj/scenarios.hpp"
#include "qproj/specfun.hpp"

using namespace qproj;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

std::string fmt(const char* f, double a, double b2) {
  char b[160];
  std::snprintf(b, sizeof b, f, a, b2);
  return b;
}

std::string fmt(const char* f, double a, double b2, double c) {
  char b[200];
  std::snprintf(b, sizeof b, f, a, b2, c);
  return b;
}

// ------------------------------------------------------------------ phi curve

std::vector<phi_alpha::CurvePoint> g_curve;

const std::vector<phi_alpha::CurvePoint>& curve() {
  if (g_curve.empty()) {
    std::vector<double> alphas;
    for (int i = 1; i <= 200; ++i) alphas.push_back(0.5 * i);
    g_curve = phi_alpha::phi_curve(alphas, 1e-4);
  }
  return g_curve;
}

Outcome criterion1() {
  const auto& c = curve();
  double worst = -1e300;
  double min_pos = 1e300;
  std::size_t failures = 0;
  for (const auto& p : c) {
    if (!p.error.empty()) {
      ++failures;
      continue;
    }
    worst = std::max(worst, p.result.phi - phi_alpha::linear_upper_bound(p.result.alpha) - 1e-4);
    if (p.result.alpha >= 0.1) min_pos = std::min(min_pos, p.result.phi);
  }
  Outcome o;
  o.pass = failures == 0 && worst <= 0.0 && min_pos > 0.0;
  o.detail = fmt("200 points, max(phi - linear - delta) = %.3e, min phi (alpha >= 0.1) = %.6f, failures %.0f", worst,
                 min_pos, static_cast<double>(failures));
  return o;
}

Outcome criterion2() {
  const auto& c = curve();
  double worst_drop = 0.0;
  std::vector<double> a, p;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) worst_drop = std::max(worst_drop, c[i - 1].result.phi - c[i].result.phi);
    if (c[i].result.alpha >= 25.0) {
      a.push_back(c[i].result.alpha);
      p.push_back(c[i].result.phi);
    }
  }
  const auto fit = phi_alpha::fit_inverse_sqrt(a, p);
  Outcome o;
  o.pass = worst_drop <= 2e-4 && fit.r >= 0.036 && fit.r <= 0.041;
  o.detail = fmt("largest decrease %.3e (limit 2e-4), fit intercept r = %.6f (target [0.036, 0.041]), s = %.5f",
                 worst_drop, fit.r, fit.s);
  return o;
}

// ------------------------------------------------------------------ c_bm

Outcome criterion3() {
  const auto r = cbm::lower_bound(1000, 2500.0);
  Outcome o;
  o.pass = r.corrected_lower_bound >= 0.0315;
  o.detail = fmt("lower bound %.6f (raw %.6f, epsilon %.3e), need >= 0.0315", r.corrected_lower_bound, r.raw_value,
                 r.epsilon);
  return o;
}

bool g_werner_ok = false;

Outcome criterion4() {
  cbm::ScanOptions opt;
  const auto s = cbm::tilde_A_scan({}, cbm::default_eta_grid(), opt);
  const double e1 = std::abs(s.inf_lambda_min - (-0.155940));
  const double e2 = std::abs(s.sup_lambda_max - 1.007678);
  g_werner_ok = e1 <= 2e-3 && e2 <= 2e-3;
  Outcome o;
  o.pass = g_werner_ok;
  o.detail = fmt("quadrant spectrum [%.6f, %.6f], flagged %.0f", s.inf_lambda_min, s.sup_lambda_max,
                 static_cast<double>(s.flagged));
  return o;
}

Outcome criterion5() {
  cbm::ScanOptions opt;
  opt.eps_reg = 1e-3;
  const auto s = cbm::tilde_A_scan(cbm::paper_weights(), cbm::default_eta_grid(), opt);
  Outcome o;
  o.pass = g_werner_ok && s.inf_lambda_min >= -0.0745;
  o.detail = fmt("inf lambda_min = %.6f at eta = %.3f (need >= -0.0745), flagged %.0f", s.inf_lambda_min, s.eta_at_inf,
                 static_cast<double>(s.flagged));
  if (!g_werner_ok) o.detail += "; gated by criterion 4";
  return o;
}

// ------------------------------------------------------------------ restricted projectile

Outcome criterion6() {
  const auto s = restricted::spectral_seed(170);
  const bool main_ok = std::abs(s.bound - 0.1113) <= 5e-4;
  const auto t0 = std::chrono::steady_clock::now();
  const auto big = restricted::spectral_seed(1700, Precision::Extended);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool stretch_ok = std::abs(big.bound - 0.1228) <= 1e-3;
  Outcome o;
  o.pass = main_ok && stretch_ok;
  o.detail = fmt("N=170: %.7f (target 0.1113 +- 5e-4); ", s.bound) +
             fmt("stretch N=1700 extended: %.7f (target 0.1228 +- 1e-3, %.0f s) ", big.bound, secs) +
             (stretch_ok ? "met" : "not met");
  return o;
}

// ------------------------------------------------------------------ classical transport

MarginalPair uniform_pair(double a) {
  MarginalPair mp;
  mp.x_grid = Grid1D::with_step(-2.0, 3.0, 1e-3);
  mp.p_grid = mp.x_grid;
  for (double x : mp.x_grid.nodes()) mp.mu.push_back(x >= 0.0 && x <= 1.0 ? 1.0 : 0.0);
  const double z = trapezoid(mp.mu, mp.x_grid.step());
  for (double& v : mp.mu) v /= z;
  mp.nu = mp.mu;
  mp.a = a;
  return mp;
}

Outcome criterion7() {
  gen::Rng rng(20240917);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto mp = gen::mixture_pair(rng, rng.uniform(-1.5, 1.5));
    const double ode = classical::classical_max(mp).p_star;
    const auto xs = classical::quantile_samples(mp.x_grid, mp.mu, 20000);
    const auto ys = classical::quantile_samples(mp.p_grid, mp.nu, 20000);
    worst = std::max(worst, std::abs(ode - classical::greedy_matching_oracle(xs, ys, mp.a)));
  }
  const double u1 = classical::classical_max(uniform_pair(1.0)).p_star;
  const double u2 = classical::classical_max(uniform_pair(1.5)).p_star;
  Outcome o;
  o.pass = worst <= 5e-3 && std::abs(u1 - 1.0) <= 5e-3 && std::abs(u2 - 0.5) <= 5e-3;
  o.detail = fmt("max |ODE - greedy| over 20 mixtures %.3e; uniform a=1: %.5f, a=1.5: %.5f", worst, u1, u2);
  return o;
}

Outcome criterion8() {
  gen::Rng rng(8);
  const unsigned N = 10;
  classical::OdeOptions opt;  // dx = 1e-4
  const double h = 1e-6;
  double worst = 0.0;
  std::size_t checked = 0, skipped_states = 0, crossings = 0;
  for (int t = 0; t < 10; ++t) {
    const auto rho = gen::density(rng, N + 1);
    const auto g = classical::classical_max_gradient(rho, opt);
    if (g.degenerate_landings > 0) {
      ++skipped_states;
      continue;
    }
    const Eigen::VectorXd th = classical::to_parameters(rho);
    auto f = [&](const Eigen::VectorXd& x) {
      return classical::classical_max_state(classical::from_parameters(x, N), opt);
    };
    const double f0 = g.p_star;
    for (Eigen::Index k = 0; k < th.size(); ++k) {
      Eigen::VectorXd xp = th, xm = th;
      xp(k) += h;
      xm(k) -= h;
      const double fp = f(xp), fm = f(xm);
      const double dp = (fp - f0) / h, dm = (f0 - fm) / h;
      // A landing crossing inside [-h, h] shows up as a kink.
      if (std::abs(dp - dm) > 1e-2 * std::max(std::abs(dp), std::abs(dm)) + 1e-6) {
        ++crossings;
        continue;
      }
      const double fd = 0.5 * (dp + dm);
      const double err = std::abs(g.gradient(k) - fd) / std::max(std::abs(fd), 1e-4);
      worst = std::max(worst, err);
      ++checked;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-3 && checked > 0;
  o.detail = fmt("max relative error %.3e over %.0f components", worst, static_cast<double>(checked)) +
             fmt(" (%.0f kinked components, %.0f degenerate states skipped)", static_cast<double>(crossings),
                 static_cast<double>(skipped_states));
  return o;
}

Outcome criterion9() {
  const auto s = restricted::spectral_seed(30);
  const double pc = classical::classical_max_state(s.rho);
  const double dual = restricted::dual_classical_bound(s.rho);
  Outcome o;
  o.pass = std::abs(pc - dual) <= 5e-3;
  o.detail = fmt("p*_c = %.6f, tr rho(Theta(X)+Theta(P)) = %.6f, gap %.3e", pc, dual, dual - pc);
  return o;
}

// ------------------------------------------------------------------ property suites

Outcome criterion10() {
  std::vector<std::string> failed;
  gen::Rng rng(10);

  // Wigner normalization and marginals.
  {
    const Lattice2D g{Grid1D(-10.0, 10.0, 401), Grid1D(-10.0, 10.0, 401)};
    double worst = 0.0;
    for (unsigned n = 0; n <= 6; ++n) {
      const auto W = wigner_mn(n, n, g);
      worst = std::max(worst, std::abs(W.integral() - 1.0));
      for (std::size_t ix = 0; ix < g.x.points; ix += 20) {
        std::vector<double> row(g.p.points);
        for (std::size_t ip = 0; ip < g.p.points; ++ip) row[ip] = W.at(ix, ip).real();
        const double psi = specfun::hermite_function(n, g.x.at(ix));
        worst = std::max(worst, std::abs(trapezoid(row, g.p.step()) - psi * psi));
        std::vector<double> col(g.x.points);
        for (std::size_t jx = 0; jx < g.x.points; ++jx) col[jx] = W.at(jx, ix).real();
        const double phi = specfun::hermite_function(n, g.p.at(ix));
        worst = std::max(worst, std::abs(trapezoid(col, g.x.step()) - phi * phi));
      }
    }
    if (worst > 1e-6) failed.push_back(fmt("wigner %.2e", worst));
  }

  // Half-plane diagonal and even-difference zeros, exactly.
  {
    bool ok = true;
    for (double phi : {0.0, 0.3, std::numbers::pi / 4, 2.0}) {
      const auto H = theta_halfplane(phi, 300);
      for (Eigen::Index n = 0; n < H.matrix.rows(); ++n) {
        ok = ok && H.matrix(n, n) == std::complex<double>(0.5, 0.0);
        for (Eigen::Index m = n % 2; m < n; m += 2) ok = ok && H.matrix(n, m) == std::complex<double>(0.0);
      }
    }
    if (!ok) failed.push_back("halfplane structure");
  }

  // Density projection.
  {
    double idem = 0.0, expand = 0.0;
    for (int t = 0; t < 200; ++t) {
      const Eigen::Index n = rng.integer(1, 12);
      const auto a = gen::hermitian(rng, n, rng.uniform(0.1, 3.0));
      const auto b = gen::hermitian(rng, n, rng.uniform(0.1, 3.0));
      const auto pa = restricted::project_to_density(a);
      const auto pb = restricted::project_to_density(b);
      idem = std::max(idem, (restricted::project_to_density(pa) - pa).norm());
      expand = std::max(expand, (pa - pb).norm() - (a - b).norm());
    }
    if (idem > 1e-10) failed.push_back(fmt("idempotence %.2e", idem));
    if (expand > 1e-12) failed.push_back(fmt("non-expansiveness %.2e", expand));
  }

  // Rocket schedules.
  double max_bound = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto s = gen::rocket_schedule(rng);
    max_bound = std::max(max_bound, scenarios::rocket_reduce(s).bound);
  }
  if (max_bound > scenarios::kCbmUpperBound) failed.push_back(fmt("rocket bound %.5f", max_bound));

  // Scenario catalog.
  for (const auto& row : scenarios::table_catalog()) {
    const auto c = scenarios::verify_row(row);
    if (!(c.map_ok && c.operator_ok && c.states_ok)) failed.push_back("catalog row '" + row.name + "'");
  }

  Outcome o;
  o.pass = failed.empty();
  o.detail = fmt("wigner, halfplane, projection, 100 rockets (max bound %.5f), catalog", max_bound);
  for (const auto& f : failed) o.detail += "; failed: " + f;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu: %s  %s  [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
