#include "chiral/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <tuple>
#include <ctime>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "chiral/csv.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/parallel.hpp"
#include "chiral/readout.hpp"
#include "chiral/steadystate.hpp"
#include "chiral/svg.hpp"
#include "chiral/theory.hpp"

namespace chiral {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Torque unit Gamma_phi gamma / (2m) and speed unit gamma / (2m).
struct Units {
  double torque;
  double speed;
  double gamma;
};

Units units_of(const SystemParams& p) {
  const double speed = p.optical.gamma / (2.0 * p.optical.m);
  return {p.mech.Gamma_phi * speed, speed, p.optical.gamma};
}

std::vector<std::string> header_comments(const RunConfig& cfg, const std::string& what) {
  const auto& p = cfg.params;
  return {"hbar=1; rates in the units of gamma=" + format_number(p.optical.gamma) +
              "; torque_norm = tau / (Gamma_phi gamma / 2m); doppler = 2 m Omega / gamma",
          experiment_name(*cfg.experiment) + ": " + what};
}

std::vector<double> column(const CsvTable& t, std::size_t c, std::size_t first = 0,
                           std::size_t last = std::size_t(-1)) {
  std::vector<double> out;
  for (std::size_t i = first; i < std::min(last, t.rows.size()); ++i) {
    const auto* v = std::get_if<double>(&t.rows[i][c]);
    out.push_back(v ? *v : kNaN);
  }
  return out;
}

struct Emitter {
  const RunConfig& cfg;
  std::vector<OutputFile> files;

  void csv(const std::string& stem, const CsvTable& t) {
    files.push_back({stem + ".csv", t.render()});
  }
  void svg(const std::string& stem, std::string content) {
    if (cfg.emit_svg) files.push_back({stem + ".svg", std::move(content)});
  }
};

void torque_curve(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto u = units_of(cfg.params);
  const auto& mus = cfg.settings.mu_values.values;
  const auto& xs = cfg.settings.doppler_grid.values;

  CsvTable curve;
  curve.comments = header_comments(cfg, "reciprocal torque and mechanical damping vs rotation speed");
  curve.columns = {"mu",      "n0",       "doppler",     "Omega[gamma]",
                   "tau_rec", "tau_norm", "damping",     "damping_norm"};
  CsvTable roots;
  roots.comments = header_comments(cfg, "steady rotations (torque balance roots)");
  roots.columns = {"mu", "n0", "Omega[gamma]", "doppler", "stable", "marginal"};

  std::vector<svg::Series> series;
  for (double mu : mus) {
    const auto q = with_pump_ratio(cfg.params, mu);
    const double n0 = photon_number_n0(q);
    svg::Series s{"mu=" + format_number(mu), {}, {}};
    for (double x : xs) {
      const double w = x * u.speed;
      const double tau = tau_rec(w, q);
      const double damp = q.mech.Gamma_phi * w;
      curve.add_row({mu, n0, x, w, tau, tau / u.torque, damp, damp / u.torque});
      s.x.push_back(x);
      s.y.push_back(tau / u.torque);
    }
    series.push_back(std::move(s));
    for (const auto& r : find_steady_rotations(q).roots) {
      roots.add_row({mu, n0, r.Omega, r.Omega / u.speed, (long long)r.stable, (long long)r.marginal});
    }
  }
  svg::Series damping{"Gamma_phi Omega", xs, xs};
  series.push_back(damping);
  out.csv("torque-curve", curve);
  out.csv("torque-curve-roots", roots);
  out.svg("torque-curve", svg::line_plot("Reciprocal torque", "2m Omega / gamma",
                                         "tau / (Gamma_phi gamma / 2m)", series));
}

void bifurcation(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto u = units_of(cfg.params);
  const auto b = branch(cfg.settings.mu_grid.values, cfg.params);
  const double nth = *n_threshold(cfg.params);
  CsvTable t;
  t.comments = header_comments(cfg, "selected steady speed vs pump ratio; normal form empty where undefined");
  t.columns = {"mu", "n0", "Omega_star[gamma]", "doppler_star", "Omega_normal_form[gamma]",
               "doppler_normal_form"};
  for (std::size_t i = 0; i < b.mu_grid.size(); ++i) {
    t.add_row({b.mu_grid[i], b.mu_grid[i] * nth, b.omega_star[i], b.omega_star[i] / u.speed,
               b.normal_form[i], b.normal_form[i] / u.speed});
  }
  out.csv("bifurcation", t);
  out.svg("bifurcation",
          svg::line_plot("Pitchfork branch", "n0 / n_th", "2m Omega* / gamma",
                         {{"root", b.mu_grid, column(t, 3)}, {"normal form", b.mu_grid, column(t, 5)}}));
}

void time_evolution(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto& p = cfg.params;
  const auto& s = cfg.settings;
  const auto u = units_of(p);
  const auto& seeds = s.seeds.values;
  IntegratorConfig ic = cfg.integrator;
  ic.sample_dt = s.t_end / double(s.samples - 1);
  const bool full = s.model == "full";
  if (!full) ic.max_step = cfg.reduced_max_step;

  std::vector<Trajectory> runs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t k) {
    const double w0 = seeds[k] * u.speed;
    if (full) {
      FieldState s0;
      s0.Omega = w0;
      runs[k] = integrate_full(s0, s.t_end, p, ic);
    } else {
      runs[k] = integrate_reduced(w0, s.t_end, p, ic);
    }
  });

  CsvTable t;
  t.comments = header_comments(cfg, (full ? "full mean-field model" : "reduced rotor equation") +
                                        std::string(", seeds in units of gamma / 2m"));
  const double target = find_steady_rotations(p).selected_speed();
  t.comments.push_back("steady speed from the torque balance: Omega*=" + format_number(target) +
                       ", doppler*=" + format_number(target / u.speed));
  t.columns = {"seed_doppler", "t[1/gamma]", "phi", "Omega[gamma]", "doppler", "tau",
               "tau_norm",     "n_plus",     "n_minus", "L_opt"};
  std::vector<svg::Series> series;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto& tr = runs[k];
    svg::Series ser{"seed " + format_number(seeds[k]), {}, {}};
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto& st = tr.states[i];
      const auto& ob = tr.observables[i];
      t.add_row({seeds[k], tr.times[i], st.phi, st.Omega, st.Omega / u.speed, ob.tau_inst,
                 ob.tau_inst / u.torque, ob.n_plus, ob.n_minus, ob.L_opt});
      ser.x.push_back(tr.times[i]);
      ser.y.push_back(st.Omega / u.speed);
    }
    series.push_back(std::move(ser));
  }
  out.csv("time-evolution", t);
  out.svg("time-evolution", svg::line_plot("Symmetry breaking", "t", "2m Omega / gamma", series));
}

void phase_diagram_experiment(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto& s = cfg.settings;
  const double g = cfg.params.optical.gamma;
  const auto d = phase_diagram(s.delta_grid.values, s.mu_grid.values, cfg.params);
  CsvTable t;
  t.comments = header_comments(
      cfg, "doppler_selected: attractor of a small positive seed; doppler_max_stable: largest stable speed");
  t.columns = {"Delta[gamma]", "Delta_over_gamma", "mu", "n_th", "n0", "doppler_selected",
               "doppler_max_stable"};
  const std::size_t nd = d.delta_grid.size();
  for (std::size_t i = 0; i < d.mu_grid.size(); ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      t.add_row({d.delta_grid[j], d.delta_grid[j] / g, d.mu_grid[i], d.threshold_line[j],
                 d.mu_grid[i] * d.threshold_line[j], d.doppler[i * nd + j],
                 d.doppler_max_stable[i * nd + j]});
    }
  }
  out.csv("phase-diagram", t);
  std::vector<double> dg;
  for (double v : d.delta_grid) dg.push_back(v / g);
  out.svg("phase-diagram", svg::heat_map("2m Omega* / gamma", "Delta / gamma", "n0 / n_th", dg,
                                         d.mu_grid, d.doppler));
}

Spectrum spectrum_at(const RunConfig& cfg, double doppler) {
  ProbeConfig probe;
  probe.detuning_grid = cfg.settings.probe_grid.values;
  probe.Omega_star = doppler * units_of(cfg.params).speed;
  probe.use_weak_approx = cfg.settings.weak;
  return spectra(probe, cfg.params);
}

void spectra_experiment(Emitter& out) {
  const auto& cfg = out.cfg;
  const double g = cfg.params.optical.gamma;
  const double x = cfg.settings.doppler;
  const double w = x * units_of(cfg.params).speed;
  const auto sp = spectrum_at(cfg, x);
  CsvTable t;
  t.comments = header_comments(cfg, std::string(cfg.settings.weak ? "weak-scattering" : "exact") +
                                        " probe response at doppler*=" + format_number(x) +
                                        "; A_R empty where R_plus + R_minus < 1e-30");
  t.columns = {"Delta_p[gamma]", "Delta_p_over_gamma", "R_plus", "R_minus", "T_plus", "T_minus", "A_R"};
  for (std::size_t i = 0; i < sp.detunings.size(); ++i) {
    t.add_row({sp.detunings[i], sp.detunings[i] / g, sp.R_plus[i], sp.R_minus[i], sp.T_plus[i],
               sp.T_minus[i], sp.A_R_undefined[i] ? kNaN : sp.A_R[i]});
  }
  CsvTable peaks;
  peaks.comments = header_comments(cfg, "backscatter maxima (parabolic refinement, +- grid spacing)");
  peaks.columns = {"direction", "Delta_p_peak[gamma]", "Delta_p_peak_over_gamma", "R_peak",
                   "uncertainty[gamma]", "channel_center[gamma]"};
  for (const auto& [name, dir, ys] :
       {std::tuple{"plus", Direction::Plus, &sp.R_plus}, std::tuple{"minus", Direction::Minus, &sp.R_minus}}) {
    const auto pk = locate_peak(sp.detunings, *ys);
    peaks.add_row({std::string(name), pk.location, pk.location / g, pk.value, pk.uncertainty,
                   channel_center(dir, w, cfg.params)});
  }
  out.csv("spectra", t);
  out.csv("spectra-peaks", peaks);
  std::vector<double> xs;
  for (double v : sp.detunings) xs.push_back(v / g);
  out.svg("spectra", svg::line_plot("Backscattered spectra", "Delta_p / gamma", "R",
                                    {{"R+", xs, sp.R_plus}, {"R-", xs, sp.R_minus}}));
}

void asymmetry_experiment(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto& s = cfg.settings;
  const double g = cfg.params.optical.gamma;
  const auto u = units_of(cfg.params);
  const auto c = max_asymmetry_vs_power(s.mu_grid.values, cfg.params, s.probe_grid.values, s.weak);
  CsvTable t;
  t.comments = header_comments(cfg, "max over the probe grid of |A_R| at the selected steady speed");
  t.columns = {"mu", "Omega_star[gamma]", "doppler_star", "max_abs_A_R", "argmax_Delta_p[gamma]"};
  for (std::size_t i = 0; i < c.mu_grid.size(); ++i) {
    t.add_row({c.mu_grid[i], c.omega_star[i], c.omega_star[i] / u.speed, c.max_abs_asymmetry[i],
               c.argmax_detuning[i]});
  }
  const auto sp = spectrum_at(cfg, s.doppler);
  CsvTable prof;
  prof.comments = header_comments(cfg, "A_R vs probe detuning at doppler*=" + format_number(s.doppler));
  prof.columns = {"Delta_p[gamma]", "Delta_p_over_gamma", "A_R"};
  std::vector<double> xs;
  for (std::size_t i = 0; i < sp.detunings.size(); ++i) {
    prof.add_row({sp.detunings[i], sp.detunings[i] / g, sp.A_R_undefined[i] ? kNaN : sp.A_R[i]});
    xs.push_back(sp.detunings[i] / g);
  }
  out.csv("asymmetry", t);
  out.csv("asymmetry-profile", prof);
  out.svg("asymmetry", svg::line_plot("Maximum backscattering asymmetry", "n0 / n_th",
                                      "max |A_R|", {{"max |A_R|", c.mu_grid, c.max_abs_asymmetry}}));
  out.svg("asymmetry-profile",
          svg::line_plot("Backscattering asymmetry", "Delta_p / gamma", "A_R", {{"A_R", xs, sp.A_R}}));
}

void threshold_experiment(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto& p = cfg.params;
  const auto nth = n_threshold(p);
  auto at_opt = p;
  at_opt.drive.Delta = optimal_detuning(p);
  const auto nth_opt = n_threshold(at_opt);
  const double n0 = photon_number_n0(p);
  CsvTable t;
  t.comments = header_comments(cfg, "instability threshold; n_th empty when Delta <= 0 or J = 0");
  t.columns = {"m",         "gamma",      "J",          "Delta[gamma]", "Gamma_phi",
               "n_th",      "Delta_opt[gamma]", "Delta_opt_over_gamma", "n_th_at_Delta_opt",
               "n0",        "n0_over_nth", "Gamma_opt", "u_opt"};
  t.add_row({(long long)p.optical.m, p.optical.gamma, p.optical.J, p.drive.Delta, p.mech.Gamma_phi,
             nth.value_or(kNaN), at_opt.drive.Delta, at_opt.drive.Delta / p.optical.gamma,
             nth_opt.value_or(kNaN), n0, nth ? n0 / *nth : kNaN, gamma_opt(p), cubic_coeff(p)});
  out.csv("threshold", t);
}

void oracle_experiment(Emitter& out) {
  const auto& cfg = out.cfg;
  const auto& s = cfg.settings;
  const auto& Js = s.J_values.values;
  const auto& xs = s.oracle_doppler.values;
  std::vector<TorqueOracleResult> res(Js.size() * xs.size());
  parallel_for(res.size(), [&](std::size_t k) {
    auto q = cfg.params;
    q.optical.J = Js[k / xs.size()];
    res[k] = time_averaged_torque_oracle(xs[k % xs.size()] * units_of(q).speed, q, cfg.integrator);
  });
  const auto u = units_of(cfg.params);
  CsvTable t;
  t.comments = header_comments(cfg, "brute-force time-averaged torque vs closed form, pump_mode=" +
                                        pump_mode_name(cfg.params.drive.pump_mode));
  t.columns = {"J",        "J_over_gamma",      "doppler",  "Omega[gamma]", "tau_avg",
               "tau_analytic", "tau_avg_norm", "tau_analytic_norm", "rel_err"};
  std::vector<svg::Series> series;
  for (std::size_t a = 0; a < Js.size(); ++a) {
    svg::Series ser{"J=" + format_number(Js[a]), {}, {}};
    for (std::size_t b = 0; b < xs.size(); ++b) {
      const auto& r = res[a * xs.size() + b];
      t.add_row({Js[a], Js[a] / u.gamma, xs[b], r.Omega, r.tau_avg, r.tau_analytic,
                 r.tau_avg / u.torque, r.tau_analytic / u.torque, r.rel_err});
      ser.x.push_back(xs[b]);
      ser.y.push_back(std::log10(std::max(r.rel_err, 1e-300)));
    }
    series.push_back(std::move(ser));
  }
  out.csv("oracle-check", t);
  out.svg("oracle-check", svg::line_plot("Torque oracle", "2m Omega / gamma", "log10 rel_err", series));
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(data.data(), std::streamsize(data.size()));
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::map<std::string, double> derived_values(const SystemParams& p) {
  const auto nth = n_threshold(p);
  const double n0 = photon_number_n0(p);
  std::map<std::string, double> d{
      {"S_mag", p.drive.S_mag},
      {"n0", n0},
      {"n_th", nth.value_or(kNaN)},
      {"n0_over_nth", nth ? n0 / *nth : kNaN},
      {"Gamma_opt", gamma_opt(p)},
      {"u_opt", cubic_coeff(p)},
      {"Delta_opt", optimal_detuning(p)},
  };
  if (const auto* fo = std::get_if<FrequencyOffset>(&p.drive.pump_mode)) {
    d["delta_pump"] = fo->delta_pump;
  }
  return d;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["experiment"] = experiment;
  j["started_utc"] = started_utc;
  j["wall_clock_seconds"] = wall_clock_seconds;
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto& [section, keys] : config) {
    for (const auto& [k, v] : keys) c[section][k] = v;
  }
  j["config"] = c;
  nlohmann::ordered_json d = nlohmann::ordered_json::object();
  for (const auto& [k, v] : derived) {
    if (std::isfinite(v)) {
      d[k] = v;
    } else {
      d[k] = nullptr;
    }
  }
  j["derived"] = d;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : outputs) {
    j["outputs"].push_back({{"file", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  }
  return j.dump(2) + "\n";
}

std::vector<OutputFile> compute_outputs(const RunConfig& cfg) {
  if (!cfg.experiment) throw std::invalid_argument("no experiment selected");
  Emitter out{cfg, {}};
  switch (*cfg.experiment) {
    case Experiment::TorqueCurve: torque_curve(out); break;
    case Experiment::Bifurcation: bifurcation(out); break;
    case Experiment::TimeEvolution: time_evolution(out); break;
    case Experiment::PhaseDiagram: phase_diagram_experiment(out); break;
    case Experiment::Spectra: spectra_experiment(out); break;
    case Experiment::Asymmetry: asymmetry_experiment(out); break;
    case Experiment::Threshold: threshold_experiment(out); break;
    case Experiment::OracleCheck: oracle_experiment(out); break;
  }
  return std::move(out.files);
}

RunManifest run(const RunConfig& cfg) {
  RunManifest m;
  m.started_utc = utc_now();
  const auto start = std::chrono::steady_clock::now();
  const auto files = compute_outputs(cfg);
  m.experiment = experiment_name(*cfg.experiment);
  m.config = resolved_entries(cfg);
  m.derived = derived_values(cfg.params);

  std::filesystem::create_directories(cfg.out_dir);
  for (const auto& f : files) {
    write_file(cfg.out_dir / f.name, f.content);
    m.outputs.push_back({f.name, sha256_hex(f.content), f.content.size()});
  }
  m.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(cfg.out_dir / "manifest.json", m.to_json());
  return m;
}

bool ValidateReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
}

namespace {

// A small figure-parameter configuration for the self-checks.
RunConfig self_check_config(Experiment e, const std::filesystem::path& dir) {
  auto cfg = parse_config(
      "[optical]\nm = 10\nJ = 0.1\n[drive]\nDelta = 0.5773502691896258\nn0_over_nth = 1.5\n"
      "[experiment]\ndoppler_grid = 0:3:61\nprobe_grid = -3:3:401\nmu_grid = 0:2:21\n",
      "<self-check>");
  cfg.experiment = e;
  cfg.out_dir = dir;
  return cfg;
}

PropertyResult timed(std::string name, const std::function<std::pair<std::size_t, std::size_t>()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  PropertyResult r;
  r.module = "cli";
  r.name = std::move(name);
  try {
    const auto [draws, failures] = fn();
    r.draws = draws;
    r.failures = failures;
  } catch (const std::exception&) {
    r.draws = 1;
    r.failures = 1;
  }
  r.max_error = r.failures ? 1.0 : 0.0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

ValidateReport run_validate(const PropertySuiteOptions& opts, const std::filesystem::path& out_dir) {
  ValidateReport report;
  report.results = run_property_suite(opts);

  const std::vector<Experiment> quick{Experiment::Threshold, Experiment::TorqueCurve,
                                      Experiment::Bifurcation, Experiment::Spectra,
                                      Experiment::Asymmetry};
  report.results.push_back(timed("identical config gives byte-identical CSV", [&] {
    std::size_t failures = 0;
    for (auto e : quick) {
      const auto cfg = self_check_config(e, ".");
      const auto a = compute_outputs(cfg);
      const auto b = compute_outputs(cfg);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].content != b[i].content) ++failures;
      }
    }
    return std::pair{quick.size(), failures};
  }));

  report.results.push_back(timed("re-running from manifest.json reproduces checksums", [&] {
    std::mt19937_64 rng(std::random_device{}());
    const auto root = std::filesystem::temp_directory_path() /
                      ("chiralrot-validate-" + std::to_string(rng() % 1000000000));
    std::size_t failures = 0;
    for (auto e : quick) {
      const auto stem = experiment_file_stem(e);
      const auto first = run(self_check_config(e, root / (stem + "-a")));
      auto again = load_config(root / (stem + "-a") / "manifest.json");
      again.out_dir = root / (stem + "-b");
      const auto second = run(again);
      if (first.outputs.size() != second.outputs.size()) {
        ++failures;
        continue;
      }
      for (std::size_t i = 0; i < first.outputs.size(); ++i) {
        if (first.outputs[i].sha256 != second.outputs[i].sha256) ++failures;
      }
    }
    std::filesystem::remove_all(root);
    return std::pair{quick.size(), failures};
  }));

  if (!out_dir.empty()) {
    CsvTable t;
    t.comments = {"hbar=1; property suite, seed=" + std::to_string(opts.seed)};
    t.columns = {"module", "property", "draws", "failures", "max_error", "tolerance", "pass"};
    for (const auto& r : report.results) {
      t.add_row({r.module, r.name, (long long)r.draws, (long long)r.failures, r.max_error,
                 r.tolerance, std::string(r.passed() ? "PASS" : "FAIL")});
    }
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "validate.csv", t.render());
  }
  return report;
}

std::string error_record(const std::string& kind, const std::string& message,
                         const std::string& key, std::size_t line) {
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["message"] = message;
  if (!key.empty()) j["key"] = key;
  if (line) j["line"] = line;
  return j.dump();
}

}  // namespace chiral
