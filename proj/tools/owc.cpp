// owc — command-line front end.
//
//   owc check      --config run.cfg          structural hypothesis report
//   owc simulate   --config run.cfg --out d  time integration + CSV output
//   owc picard     --config run.cfg --out d  Picard iteration mode
//   owc converge   --config run.cfg          grid convergence study
//   owc ode-scaling                          boundary-ODE sqrt(T) probe
//   owc sweep section.key=v1,v2 --config ... parallel parameter sweep
//
// Exit codes: 0 ok, 2 validation refusal, 3 runtime assumption violation,
// 4 no Picard convergence, 64 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "owc/config.hpp"
#include "owc/coupling.hpp"
#include "owc/diagnostics.hpp"
#include "owc/errors.hpp"
#include "owc/output.hpp"
#include "owc/setup.hpp"
#include "owc/solver.hpp"
#include "owc/swe.hpp"
#include "owc/version.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kAssumption = 3;
constexpr int kNoConvergence = 4;
constexpr int kUsage = 64;

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  bool force = false;
  bool quiet = false;
};

struct Loaded {
  owc::io::ParsedConfig parsed;
  std::string text;  // raw config bytes (hashed into the manifest)
};

Loaded load_config(const Options& opt) {
  Loaded l;
  if (opt.config_path.empty()) {
    l.parsed.config.params = owc::PhysicalParams::defaults();
    l.parsed.config.layout.derive(l.parsed.config.params);
    l.text = owc::io::serialize(l.parsed.config);
    return l;
  }
  std::ifstream in(opt.config_path);
  if (!in)
    throw owc::ParseError(0, "cannot open config file '" + opt.config_path +
                                 "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  l.text = ss.str();
  l.parsed = owc::io::parse_config_text(l.text);
  return l;
}

void print_violations(const owc::ValidationReport& rep) {
  for (const auto& v : rep.violations)
    std::fprintf(stderr, "validation: %s: %s\n", v.key.c_str(),
                 v.message.c_str());
}

int run_simulation(const Options& opt, const Loaded& l, bool picard_mode) {
  owc::io::RunConfig rc = l.parsed.config;
  rc.solver.force = opt.force;
  if (!l.parsed.validation.pass() && !opt.force) {
    print_violations(l.parsed.validation);
    return kValidation;
  }

  owc::solver::State s0;
  owc::make_initial_state(rc.params, rc.layout, rc.initial, s0.u, s0.g);

  if (picard_mode) {
    rc.solver.picard.enabled = true;
    const owc::solver::PicardReport rep = owc::solver::picard_solve(
        s0, rc.params, rc.layout, rc.solver, rc.forcing);
    if (rep.result.status == owc::solver::RunStatus::refused) {
      std::fprintf(stderr, "refused: %s\n", rep.result.refusal.c_str());
      return kValidation;
    }
    owc::io::write_run_output(opt.out_dir, rc, l.text, rep.result, &rep);
    if (!opt.quiet) {
      std::printf("picard: dt=%.6g n_steps=%d iterations=%d\n", rep.dt,
                  rep.n_steps, rep.iterations);
      for (std::size_t k = 0; k < rep.low_norms.size(); ++k) {
        if (k == 0)
          std::printf("  iter %2zu  low_norm %.6e\n", k + 1,
                      rep.low_norms[k]);
        else
          std::printf("  iter %2zu  low_norm %.6e  ratio %.4f\n", k + 1,
                      rep.low_norms[k], rep.ratios[k - 1]);
      }
    }
    if (!rep.converged) {
      std::fprintf(stderr,
                   "no convergence after %d iterations (last low-norm %g)\n",
                   rep.iterations,
                   rep.low_norms.empty() ? 0.0 : rep.low_norms.back());
      return kNoConvergence;
    }
    if (!opt.quiet) std::printf("wrote %s\n", opt.out_dir.c_str());
    return kOk;
  }

  const owc::solver::SimulationResult res =
      owc::solver::run(s0, rc.params, rc.layout, rc.solver, rc.forcing);
  switch (res.status) {
    case owc::solver::RunStatus::refused:
      std::fprintf(stderr, "refused: %s\n", res.refusal.c_str());
      return kValidation;
    case owc::solver::RunStatus::assumption_violated: {
      owc::io::write_run_output(opt.out_dir, rc, l.text, res);
      std::fprintf(stderr,
                   "assumption violated: %s at t=%.6g, x=%.6g (%s)\n",
                   res.violation.what.c_str(), res.violation.t,
                   res.violation.x, owc::dom_tag(res.violation.dom));
      return kAssumption;
    }
    case owc::solver::RunStatus::numerical_failure:
      std::fprintf(stderr, "numerical failure at t=%.6g: %s\n",
                   res.violation.t, res.violation.what.c_str());
      return kAssumption;
    case owc::solver::RunStatus::ok:
      break;
  }
  owc::io::write_run_output(opt.out_dir, rc, l.text, res);
  if (!opt.quiet) {
    std::printf("steps=%ld t=%.6g q_i=%.6e P_ch=%.6e\n", res.steps,
                res.final_state.u.t, res.final_state.g.q_i,
                res.final_state.g.P_ch);
    std::printf("wrote %s\n", opt.out_dir.c_str());
  }
  return kOk;
}

int cmd_check(const Options& opt) {
  const Loaded l = load_config(opt);
  const owc::io::RunConfig& rc = l.parsed.config;
  const owc::PhysicalParams& p = rc.params;
  bool all_ok = true;

  const bool params_ok = l.parsed.validation.pass();
  all_ok &= params_ok;
  if (!opt.quiet || !params_ok) {
    std::printf("params/layout: %s\n", params_ok ? "PASS" : "FAIL");
    for (const auto& v : l.parsed.validation.violations)
      std::printf("  %s: %s\n", v.key.c_str(), v.message.c_str());
  }

  owc::solver::State s0;
  owc::make_initial_state(p, rc.layout, rc.initial, s0.u, s0.g);
  const owc::InitialDataReport idr = owc::check_initial_data(
      p, rc.layout, s0.u, rc.solver.c0_threshold, rc.solver.c1_threshold);
  all_ok &= idr.pass();
  std::printf("initial data: c0=%.6g (>=%.6g) c1=%.6g (>=%.6g) %s\n", idr.c0,
              idr.c0_threshold, idr.c1, idr.c1_threshold,
              idr.pass() ? "PASS" : "FAIL");

  const owc::coupling::CompatReport comp =
      owc::coupling::compatibility_check(s0.u, s0.g, 1, p, rc.layout);
  const bool comp_ok = comp.norm0 <= rc.solver.compat_tol &&
                       comp.norm1 <= rc.solver.compat_tol;
  all_ok &= comp_ok;
  std::printf("compatibility: |r0|=%.6g |r1|=%.6g %s\n", comp.norm0,
              comp.norm1, comp_ok ? "PASS" : "FAIL");

  // structural hypotheses at the wall trace states
  const owc::swe::CellState ul{s0.u.epl.zeta.back(), s0.u.epl.q.back(),
                               p.h_0};
  const owc::swe::CellState ur{s0.u.epr.zeta.front(), s0.u.epr.q.front(),
                               p.h_0};
  try {
    const owc::swe::Lopatinskii lop = owc::swe::lopatinskii(ul, ur, p.g);
    const bool lop_ok = std::abs(lop.det) >= 1e-6 && lop.inv_norm <= 2.0;
    all_ok &= lop_ok;
    std::printf("L = [[%g,%g],[%g,%g]], det=%g, %s\n", lop.L.m[0][0],
                lop.L.m[0][1], lop.L.m[1][0], lop.L.m[1][1], lop.det,
                lop_ok ? "PASS" : "FAIL");

    const owc::Mat4 A4 = owc::swe::system_matrix4(ul, ur, p.g);
    const owc::Mat4 S4 = owc::swe::kreiss_symmetrizer4(ul, ur, p.g);
    const owc::swe::Dissipativity dis = owc::swe::boundary_dissipativity(
        S4, A4, owc::swe::boundary_matrix());
    std::printf(
        "dissipativity: kernel_min=%.6g c2=%.6g C2=%.6g PASS\n",
        dis.kernel_min, dis.c2, dis.C2);
  } catch (const owc::Error& e) {
    all_ok = false;
    std::printf("structural check FAIL: %s\n", e.what());
  }

  std::printf("check: %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? kOk : kValidation;
}

int cmd_converge(const Options& opt, const std::string& factors_csv) {
  const Loaded l = load_config(opt);
  const owc::io::RunConfig& rc = l.parsed.config;
  if (!l.parsed.validation.pass() && !opt.force) {
    print_violations(l.parsed.validation);
    return kValidation;
  }
  std::vector<int> factors;
  {
    std::istringstream ss(factors_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) factors.push_back(std::stoi(tok));
  }
  owc::solver::SolverConfig cfg = rc.solver;
  cfg.force = opt.force;
  const owc::diag::ConvergenceReport rep = owc::diag::convergence_study(
      rc.params, rc.layout, cfg, rc.initial, rc.forcing, factors);
  if (!opt.quiet) {
    for (std::size_t k = 0; k < rep.errors.size(); ++k)
      std::printf("factor %d  dx=%.6g  error=%.6e\n", rep.factors[k],
                  rep.dx[k], rep.errors[k]);
    std::printf("fitted order: %.3f%s\n", rep.fitted_order,
                rep.monotone ? "" : "  (non-monotone errors)");
  }
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream os(std::filesystem::path(opt.out_dir) / "convergence.csv");
  owc::io::write_convergence_csv(os, rep);
  return kOk;
}

int cmd_ode_scaling(const Options& opt, const std::string& t_csv,
                    double jump, int n_steps) {
  const Loaded l = load_config(opt);
  const owc::PhysicalParams& p = l.parsed.config.params;
  std::vector<double> T_list;
  {
    std::istringstream ss(t_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) T_list.push_back(std::stod(tok));
  }
  const owc::swe::CellState left{0.0, 0.0, p.h_0};
  const owc::swe::CellState right{jump, 0.0, p.h_0};
  const owc::diag::OdeScalingReport rep = owc::diag::ode_scaling_test(
      p, [&](double) { return owc::coupling::WallTraces{left, right}; },
      T_list, owc::BoundaryState{}, n_steps);
  if (!opt.quiet) {
    for (std::size_t k = 0; k < rep.T.size(); ++k)
      std::printf("T=%.6g  |G-G0|_H1=%.6e\n", rep.T[k], rep.h1_norm[k]);
    std::printf("fitted exponent: %.4f (C=%.4g, residual %.3g) %s\n",
                rep.fitted_exponent, rep.fitted_C, rep.fit_residual,
                rep.pass ? "PASS" : "FAIL");
  }
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream os(std::filesystem::path(opt.out_dir) / "ode_scaling.csv");
  owc::io::write_ode_scaling_csv(os, rep);
  return kOk;
}

int cmd_sweep(const Options& opt, const std::string& spec) {
  const Loaded l = load_config(opt);
  const std::size_t eq = spec.find('=');
  const std::size_t dot = spec.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    std::fprintf(stderr, "sweep expects section.key=v1,v2,...\n");
    return kUsage;
  }
  const std::string section = spec.substr(0, dot);
  const std::string key = spec.substr(dot + 1, eq - dot - 1);
  std::vector<std::string> values;
  {
    std::istringstream ss(spec.substr(eq + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(tok);
  }
  if (values.empty()) {
    std::fprintf(stderr, "sweep: no values given\n");
    return kUsage;
  }

  struct Outcome {
    std::string value;
    int code = kOk;
    std::string message;
  };
  std::vector<std::future<Outcome>> futs;
  for (const std::string& v : values) {
    futs.push_back(std::async(std::launch::async, [&, v]() {
      Outcome oc;
      oc.value = v;
      // override by appending: within a section the last key wins
      const std::string text =
          l.text + "\n[" + section + "]\n" + key + " = " + v + "\n";
      try {
        Options sub = opt;
        sub.out_dir = (std::filesystem::path(opt.out_dir) / (key + "_" + v))
                          .string();
        sub.quiet = true;
        Loaded ls;
        ls.text = text;
        ls.parsed = owc::io::parse_config_text(text);
        oc.code = run_simulation(sub, ls, false);
      } catch (const owc::Error& e) {
        oc.code = kValidation;
        oc.message = e.what();
      }
      return oc;
    }));
  }
  int worst = kOk;
  for (auto& f : futs) {
    const Outcome oc = f.get();
    if (!opt.quiet)
      std::printf("%s = %s -> exit %d%s%s\n", key.c_str(), oc.value.c_str(),
                  oc.code, oc.message.empty() ? "" : ": ",
                  oc.message.c_str());
    worst = std::max(worst, oc.code);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"owcsim: shallow-water oscillating-water-column simulator"};
  app.set_version_flag("--version", owc::kVersion);
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "Run configuration file");
  app.add_option("--out", opt.out_dir, "Output directory (default: out)");
  app.add_flag("--force", opt.force, "Proceed despite validation failures");
  app.add_flag("--quiet", opt.quiet, "Suppress report output");

  auto* c_check =
      app.add_subcommand("check", "Validate config and structural hypotheses");
  auto* c_sim = app.add_subcommand("simulate", "Integrate the coupled system");
  auto* c_pic = app.add_subcommand("picard", "Run the Picard iteration mode");
  auto* c_conv = app.add_subcommand("converge", "Grid convergence study");
  std::string factors_csv = "1,2,4";
  c_conv->add_option("--factors", factors_csv,
                     "Comma-separated refinement factors");
  auto* c_ode = app.add_subcommand("ode-scaling",
                                   "Boundary-ODE sqrt(T) scaling probe");
  std::string t_csv = "0.1,0.05,0.025,0.0125";
  double ode_jump = 0.01;
  int ode_steps = 10000;
  c_ode->add_option("--T", t_csv, "Comma-separated horizons");
  c_ode->add_option("--jump", ode_jump, "Right-wall elevation of the traces");
  c_ode->add_option("--n-steps", ode_steps, "Integration steps per horizon");
  auto* c_sweep =
      app.add_subcommand("sweep", "Parallel simulate over a parameter list");
  std::string sweep_spec;
  c_sweep->add_option("spec", sweep_spec, "section.key=v1,v2,...")
      ->required();

  for (auto* sc : {c_check, c_sim, c_pic, c_conv, c_ode, c_sweep})
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_check->parsed()) return cmd_check(opt);
    if (c_sim->parsed()) return run_simulation(opt, load_config(opt), false);
    if (c_pic->parsed()) return run_simulation(opt, load_config(opt), true);
    if (c_conv->parsed()) return cmd_converge(opt, factors_csv);
    if (c_ode->parsed()) return cmd_ode_scaling(opt, t_csv, ode_jump,
                                                ode_steps);
    if (c_sweep->parsed()) return cmd_sweep(opt, sweep_spec);
  } catch (const owc::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kValidation;
  } catch (const owc::UnknownKey& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kValidation;
  } catch (const owc::MissingKey& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kValidation;
  } catch (const owc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kAssumption;
  }
  return kUsage;
}
