#include <exception>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qproj/parallel.hpp"

using namespace qproj::cli;

int main(int argc, char** argv) {
  CLI::App app{"Quantum arrival-advantage toolkit"};
  app.require_subcommand(1);
  GlobalConfig g;
  std::string precision = "double";
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--precision", precision, "Matrix-element precision: double | extended")
      ->check(CLI::IsMember({"double", "extended"}))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized starts")->capture_default_str();

  PhiCurveConfig phi;
  auto* s_phi = app.add_subcommand("phi-curve", "Advantage curve phi(alpha) on (0, alpha-max]");
  s_phi->add_option("--alpha-max", phi.alpha_max)->capture_default_str();
  s_phi->add_option("--points", phi.points)->capture_default_str();
  s_phi->add_option("--delta", phi.delta, "Certified precision")->capture_default_str();
  s_phi->add_option("--fit-min", phi.fit_min, "Lower end of the r - s/sqrt(alpha) fit window")->capture_default_str();
  s_phi->add_flag("!--no-svg", phi.svg, "Skip the SVG plot");

  CbmConfig cbm;
  auto* s_cbm = app.add_subcommand("cbm", "Lower and upper bounds on the Bracken-Melloy constant");
  s_cbm->add_option("--N", cbm.N, "Number-basis truncation for the lower bound")->capture_default_str();
  s_cbm->add_option("--lambda", cbm.lambda, "Support penalty")->capture_default_str();
  s_cbm->add_option("--eps-reg", cbm.eps_reg, "Regularization of the hyperbolic-region diagonal")->capture_default_str();
  s_cbm->add_option("--eta-min", cbm.eta_min)->capture_default_str();
  s_cbm->add_option("--eta-max", cbm.eta_max)->capture_default_str();
  s_cbm->add_option("--eta-step", cbm.eta_step)->capture_default_str();
  s_cbm->add_option("--weights", cbm.weights, "Hyperbolic-region weights k:w,k:w (empty: quadrant only)")
      ->capture_default_str();
  s_cbm->add_flag("--skip-lower", cbm.skip_lower);
  s_cbm->add_flag("--skip-upper", cbm.skip_upper);
  s_cbm->add_flag("--no-refine", cbm.no_refine, "Disable refinement around local extrema");
  s_cbm->add_option("--projected-N", cbm.projected_N, "Basis for the non-certified projected estimate");

  RestrictedConfig res;
  auto* s_res = app.add_subcommand("restricted", "Restricted-projectile spectral bound and gradient ascent");
  s_res->add_option("--N", res.N)->capture_default_str();
  s_res->add_option("--step", res.step)->capture_default_str();
  s_res->add_option("--iters", res.iters)->capture_default_str();
  s_res->add_option("--ode-dx", res.ode_dx, "Euler step during the ascent")->capture_default_str();
  s_res->add_option("--final-dx", res.final_dx, "Euler step for reported objectives")->capture_default_str();
  s_res->add_flag("--random-start", res.random_start, "Start the ascent from a random state (uses --seed)");
  s_res->add_flag("--evaluate", res.evaluate, "Evaluate W at the seed for any N");
  s_res->add_flag("--export-operator", res.export_operator, "Write the triple-Theta matrix as (row, col, re, im)");

  ClassicalConfig cl;
  auto* s_cl = app.add_subcommand("classical", "Optimal classical arrival probability for given marginals");
  s_cl->add_option("--mu", cl.mu_path, "Position density CSV (x, density)")->required();
  s_cl->add_option("--nu", cl.nu_path, "Momentum density CSV (p, density)")->required();
  s_cl->add_option("--a", cl.a)->capture_default_str();
  s_cl->add_option("--M", cl.M)->capture_default_str();
  s_cl->add_option("--dT", cl.dT)->capture_default_str();
  s_cl->add_option("--dx", cl.dx)->capture_default_str();
  s_cl->add_option("--lo", cl.lo)->capture_default_str();
  s_cl->add_option("--hi", cl.hi)->capture_default_str();
  s_cl->add_option("--oracle", cl.oracle_samples, "Cross-check with the greedy matching oracle on this many samples");

  RocketConfig rk;
  auto* s_rk = app.add_subcommand("rocket", "Reduce a rocket burn schedule to a projectile bound");
  s_rk->add_option("--schedule", rk.schedule_path, "Schedule JSON {M, l, lambda, burns: [{t, m}], t_final}")
      ->required();
  s_rk->add_option("--alpha-cap", rk.alpha_cap)->capture_default_str();
  s_rk->add_option("--delta", rk.delta)->capture_default_str();

  WignerConfig wg;
  auto* s_wg = app.add_subcommand("wigner", "Export a Wigner function on a phase-space lattice");
  s_wg->add_option("--state", wg.state, "number | seed | cbm")
      ->check(CLI::IsMember({"number", "seed", "cbm"}))
      ->capture_default_str();
  s_wg->add_option("--N", wg.N)->capture_default_str();
  s_wg->add_option("--n", wg.n)->capture_default_str();
  s_wg->add_option("--m", wg.m)->capture_default_str();
  s_wg->add_option("--lambda", wg.lambda)->capture_default_str();
  s_wg->add_option("--points", wg.points)->capture_default_str();
  s_wg->add_option("--extent", wg.extent, "Half-width of the lattice (0: automatic)")->capture_default_str();
  s_wg->add_option("--du", wg.du, "Quadrature step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    g.precision = qproj::parse_precision(precision);
    qproj::set_default_threads(g.threads);
    if (s_phi->parsed()) return run_phi_curve(g, phi);
    if (s_cbm->parsed()) return run_cbm(g, cbm);
    if (s_res->parsed()) return run_restricted(g, res);
    if (s_cl->parsed()) return run_classical(g, cl);
    if (s_rk->parsed()) return run_rocket(g, rk);
    if (s_wg->parsed()) return run_wigner(g, wg);
  } catch (const qproj::PrecisionError& e) {
    std::cerr << "precision failure: " << e.what() << '\n';
    return kPrecisionFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecisionFailure;
  }
  return kInvalidInput;
}
