// chiralrot: command-line front end for the chiral rotation simulator.
//
//   chiralrot <subcommand> --config <path> [--out <dir>] [--svg]
//   chiralrot validate [--out <dir>] [--seed N] [--draws N]

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "chiral/config.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/run.hpp"

namespace fs = std::filesystem;

namespace {

void report_error(const std::string& record, const fs::path& dir) {
  std::cerr << record << "\n";
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(dir / "error.json");
  if (f) f << record << "\n";
}

int run_experiment(chiral::Experiment e, const std::string& config_path, const std::string& out,
                   bool svg) {
  fs::path dir = out;
  try {
    auto cfg = chiral::load_config(config_path);
    cfg.experiment = e;
    if (!out.empty()) cfg.out_dir = out;
    dir = cfg.out_dir;
    if (svg) cfg.emit_svg = true;
    const auto m = chiral::run(cfg);
    for (const auto& o : m.outputs) std::cout << (cfg.out_dir / o.name).string() << "  " << o.sha256 << "\n";
    std::cout << (cfg.out_dir / "manifest.json").string() << "\n";
    return 0;
  } catch (const chiral::ConfigParseError& err) {
    report_error(chiral::error_record("parse", err.what(), {}, err.line()), dir);
    return 2;
  } catch (const chiral::ConfigError& err) {
    report_error(chiral::error_record("config", err.what(), err.key(), err.line()), dir);
    return 2;
  } catch (const chiral::IntegrationError& err) {
    report_error(chiral::error_record("integration", err.what()), dir);
    return 3;
  } catch (const std::domain_error& err) {
    report_error(chiral::error_record("domain", err.what()), dir);
    return 3;
  } catch (const std::exception& err) {
    report_error(chiral::error_record("runtime", err.what()), dir);
    return 3;
  }
}

int run_validate(const std::string& out, const chiral::PropertySuiteOptions& opts) {
  try {
    const auto report = chiral::run_validate(opts, out);
    for (const auto& r : report.results) {
      std::printf("%s  %-11s %-64s draws=%-5zu failures=%-3zu max_err=%.3g tol=%.3g (%.2fs)\n",
                  r.passed() ? "PASS" : "FAIL", r.module.c_str(), r.name.c_str(), r.draws,
                  r.failures, r.max_error, r.tolerance, r.seconds);
    }
    std::printf("%s\n", report.all_passed() ? "all properties passed" : "property failures");
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& err) {
    report_error(chiral::error_record("runtime", err.what()), out);
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-generated chiral rotation of a backscatterer in a whispering-gallery resonator"};
  app.set_version_flag("--version", chiral::kToolVersion);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    chiral::Experiment experiment;
    const char* help;
  };
  const Sub subs[] = {
      {"torque-curve", chiral::Experiment::TorqueCurve, "reciprocal torque vs speed and its roots"},
      {"bifurcation", chiral::Experiment::Bifurcation, "steady speed vs pump ratio"},
      {"time-evolution", chiral::Experiment::TimeEvolution, "seeded trajectories"},
      {"phase-diagram", chiral::Experiment::PhaseDiagram, "steady speed over (Delta, n0/n_th)"},
      {"spectra", chiral::Experiment::Spectra, "direction-resolved probe spectra"},
      {"asymmetry", chiral::Experiment::Asymmetry, "backscattering asymmetry vs pump ratio"},
      {"threshold", chiral::Experiment::Threshold, "threshold photon number and optimal detuning"},
      {"oracle-check", chiral::Experiment::OracleCheck, "brute-force check of the torque law"},
  };

  std::string config_path, out;
  bool svg = false;
  int status = 0;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("--config", config_path, "INI config or manifest.json")->required();
    cmd->add_option("--out", out, "output directory (overrides [output] dir)");
    cmd->add_flag("--svg", svg, "also write SVG plots");
    cmd->callback([&, e = s.experiment] { status = run_experiment(e, config_path, out, svg); });
  }

  chiral::PropertySuiteOptions opts;
  auto* val = app.add_subcommand("validate", "run the randomized invariant suite");
  val->add_option("--config", config_path, "accepted for symmetry; unused");
  val->add_option("--out", out, "directory for validate.csv");
  val->add_option("--seed", opts.seed, "base seed");
  val->add_option("--draws", opts.draws, "draws for closed-form and root-finding properties");
  val->add_option("--trajectory-draws", opts.trajectory_draws, "draws for integrating properties");
  val->add_option("--full-draws", opts.full_model_draws, "draws for the full-model saturation check");
  val->callback([&] { status = run_validate(out, opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return status;
}
