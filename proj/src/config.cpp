#include "chiral/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "chiral/csv.hpp"
#include "chiral/theory.hpp"

namespace chiral {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"optical", {"m", "gamma", "kappa_ex", "J"}},
      {"drive", {"Delta", "S_mag", "n0", "n0_over_nth", "pump_mode", "delta_pump", "chi"}},
      {"mech", {"I", "Gamma_phi"}},
      {"experiment",
       {"experiment", "mu_values", "doppler_grid", "mu_grid", "delta_grid", "probe_grid", "seeds",
        "J_values", "oracle_doppler", "doppler", "t_end", "samples", "model", "weak"}},
      {"integrator",
       {"rel_tol", "abs_tol", "max_step", "sample_dt", "time_budget", "reduced_max_step"}},
      {"output", {"dir", "svg"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string compose_message(const std::string& key, const std::string& what, std::size_t line) {
  std::string msg = what;
  if (!key.empty() && what.rfind(key, 0) != 0) msg = key + ": " + what;
  if (line) msg += " (line " + std::to_string(line) + ")";
  return msg;
}

// Line of every "section.key" in INI text, for error context.
std::map<std::string, std::size_t> key_lines(const std::string& text) {
  std::map<std::string, std::size_t> out;
  std::istringstream in(text);
  std::string line, section;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos) out[section + "." + trim(std::string_view(t).substr(0, eq))] = n;
  }
  return out;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::map<std::string, std::size_t> lines)
      : tree_(tree), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = lines_.find(key);
    throw ConfigError(key, what, it == lines_.end() ? 0 : it->second);
  }

  void check_schema() const {
    for (const auto& [section, body] : tree_) {
      const auto s = schema().find(section);
      if (s == schema().end()) {
        if (body.empty()) fail(section, "key outside of any section");
        fail(section, "unknown section [" + section + "]");
      }
      for (const auto& [key, value] : body) {
        if (!value.empty()) fail(section + "." + key, "nested keys are not allowed");
        if (!s->second.count(key)) fail(section + "." + key, "unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::optional<std::string> raw(const std::string& key) const {
    if (const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
      return trim(*v);
    }
    return std::nullopt;
  }

  double number(const std::string& key, double fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    return to_double(key, *v);
  }

  double to_double(const std::string& key, const std::string& text) const {
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
      fail(key, "expected a number, got '" + text + "'");
    }
    return out;
  }

  long long integer(const std::string& key, long long fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    long long out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc() || res.ptr != v->data() + v->size() || v->empty()) {
      fail(key, "expected an integer, got '" + *v + "'");
    }
    return out;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    fail(key, "expected true or false, got '" + *v + "'");
  }

  Grid grid(const std::string& key, const std::string& fallback) const {
    const auto text = raw(key).value_or(fallback);
    try {
      return parse_grid(text);
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  }

 private:
  const pt::ptree& tree_;
  std::map<std::string, std::size_t> lines_;
};

void require_ascending(const Reader& r, const std::string& key, const Grid& g) {
  for (std::size_t i = 1; i < g.values.size(); ++i) {
    if (!(g.values[i] > g.values[i - 1])) r.fail(key, "grid must be strictly ascending");
  }
}

void require_all(const Reader& r, const std::string& key, const Grid& g, bool (*ok)(double),
                 const std::string& what) {
  for (double v : g.values) {
    if (!ok(v)) r.fail(key, what);
  }
}

PumpMode read_pump_mode(const Reader& r, const SystemParams& p) {
  const auto name = r.raw("drive.pump_mode").value_or("PhaseAveraged");
  const bool has_offset = r.has("drive.delta_pump");
  const bool has_chi = r.has("drive.chi");
  if (name != "FrequencyOffset" && has_offset) {
    r.fail("drive.delta_pump", "only valid with pump_mode = FrequencyOffset");
  }
  if (name != "FixedPhase" && has_chi) r.fail("drive.chi", "only valid with pump_mode = FixedPhase");
  if (name == "PhaseAveraged") return PhaseAveraged{};
  if (name == "SinglePumpSuperposition") return SinglePumpSuperposition{};
  if (name == "FrequencyOffset") {
    return FrequencyOffset{r.number("drive.delta_pump", default_pump_offset(p))};
  }
  if (name == "FixedPhase") return FixedPhase{r.number("drive.chi", 0.0)};
  r.fail("drive.pump_mode", "unknown pump mode '" + name +
                                "' (PhaseAveraged, SinglePumpSuperposition, FrequencyOffset, "
                                "FixedPhase)");
}

RunConfig build(const pt::ptree& tree, std::map<std::string, std::size_t> lines) {
  const Reader r(tree, std::move(lines));
  r.check_schema();

  RunConfig cfg;
  auto& p = cfg.params;
  const long long m = r.integer("optical.m", p.optical.m);
  if (m < 1) r.fail("optical.m", "must be an integer >= 1");
  if (m > 1000000) r.fail("optical.m", "must be <= 1e6");
  p.optical.m = int(m);
  p.optical.gamma = r.number("optical.gamma", 1.0);
  p.optical.kappa_ex = r.number("optical.kappa_ex", 1.0);
  p.optical.J = r.number("optical.J", p.optical.J);
  if (!r.has("drive.Delta")) r.fail("drive.Delta", "required");
  p.drive.Delta = r.number("drive.Delta", 0.0);
  p.mech.I = r.number("mech.I", 1.0e4);
  p.mech.Gamma_phi = r.number("mech.Gamma_phi", 1.0);

  // Exactly one way of giving the drive strength.
  std::vector<std::pair<std::string, DriveSpec>> given;
  for (const auto& [key, spec] : {std::pair{"drive.S_mag", DriveSpec::S_mag},
                                  std::pair{"drive.n0", DriveSpec::n0},
                                  std::pair{"drive.n0_over_nth", DriveSpec::n0_over_nth}}) {
    if (r.has(key)) given.emplace_back(key, spec);
  }
  if (given.size() != 1) {
    r.fail(given.empty() ? "drive" : given[1].first,
           "exactly one of S_mag, n0, n0_over_nth must be given");
  }
  cfg.drive_spec = given[0].second;
  cfg.drive_value = r.number(given[0].first, 0.0);
  if (!(cfg.drive_value >= 0.0) || !std::isfinite(cfg.drive_value)) {
    r.fail(given[0].first, "must be a finite value >= 0");
  }

  p.drive.pump_mode = PhaseAveraged{};
  p.drive.S_mag = 0.0;
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    r.fail(msg.substr(0, msg.find(' ')), msg);
  }
  p.drive.pump_mode = read_pump_mode(r, p);

  switch (cfg.drive_spec) {
    case DriveSpec::S_mag:
      p.drive.S_mag = cfg.drive_value;
      break;
    case DriveSpec::n0:
      p = with_photon_number(p, cfg.drive_value);
      break;
    case DriveSpec::n0_over_nth:
      if (!n_threshold(p)) {
        r.fail("drive.n0_over_nth", "no instability threshold here (needs Delta > 0 and J > 0)");
      }
      p = with_pump_ratio(p, cfg.drive_value);
      break;
  }
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    r.fail(msg.substr(0, msg.find(' ')), msg);
  }

  if (const auto name = r.raw("experiment.experiment")) {
    cfg.experiment = parse_experiment(*name);
    if (!cfg.experiment) r.fail("experiment.experiment", "unknown experiment '" + *name + "'");
  }

  auto& s = cfg.settings;
  const double g = p.optical.gamma;
  s.mu_values = r.grid("experiment.mu_values", s.mu_values.text);
  s.doppler_grid = r.grid("experiment.doppler_grid", s.doppler_grid.text);
  s.mu_grid = r.grid("experiment.mu_grid", s.mu_grid.text);
  s.delta_grid = r.grid("experiment.delta_grid", s.delta_grid.text);
  s.probe_grid = r.grid("experiment.probe_grid",
                        format_number(-3.0 * g) + ":" + format_number(3.0 * g) + ":4001");
  s.seeds = r.grid("experiment.seeds", s.seeds.text);
  s.J_values = r.grid("experiment.J_values", s.J_values.text);
  s.oracle_doppler = r.grid("experiment.oracle_doppler", s.oracle_doppler.text);
  s.doppler = r.number("experiment.doppler", s.doppler);
  s.t_end = r.number("experiment.t_end", 30.0 * p.mech.I / p.mech.Gamma_phi);
  const long long samples = r.integer("experiment.samples", (long long)s.samples);
  if (samples < 2) r.fail("experiment.samples", "must be >= 2");
  s.samples = std::size_t(samples);
  s.model = r.raw("experiment.model").value_or(s.model);
  if (s.model != "reduced" && s.model != "full") {
    r.fail("experiment.model", "must be 'reduced' or 'full'");
  }
  s.weak = r.boolean("experiment.weak", s.weak);

  require_all(r, "experiment.mu_values", s.mu_values, [](double v) { return v >= 0.0; }, "values must be >= 0");
  require_all(r, "experiment.mu_grid", s.mu_grid, [](double v) { return v >= 0.0; }, "values must be >= 0");
  require_ascending(r, "experiment.mu_grid", s.mu_grid);
  require_all(r, "experiment.delta_grid", s.delta_grid, [](double v) { return v > 0.0; }, "values must be > 0");
  require_ascending(r, "experiment.delta_grid", s.delta_grid);
  require_ascending(r, "experiment.probe_grid", s.probe_grid);
  require_ascending(r, "experiment.doppler_grid", s.doppler_grid);
  require_all(r, "experiment.seeds", s.seeds, [](double v) { return std::isfinite(v); }, "values must be finite");
  require_all(r, "experiment.J_values", s.J_values, [](double v) { return v > 0.0; }, "values must be > 0");
  require_all(r, "experiment.oracle_doppler", s.oracle_doppler, [](double v) { return std::isfinite(v); }, "values must be finite");
  if (!std::isfinite(s.doppler)) r.fail("experiment.doppler", "must be finite");
  if (!(s.t_end > 0.0) || !std::isfinite(s.t_end)) r.fail("experiment.t_end", "must be > 0");

  auto& ic = cfg.integrator;
  ic.rel_tol = r.number("integrator.rel_tol", ic.rel_tol);
  ic.abs_tol = r.number("integrator.abs_tol", ic.abs_tol);
  ic.max_step = r.number("integrator.max_step", ic.max_step);
  ic.sample_dt = r.number("integrator.sample_dt", ic.sample_dt);
  ic.time_budget = r.number("integrator.time_budget", ic.time_budget);
  try {
    ic.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto word = msg.substr(0, msg.find(" must"));
    r.fail("integrator." + word.substr(word.rfind(' ') + 1), msg);
  }
  cfg.reduced_max_step =
      r.number("integrator.reduced_max_step", 0.01 * p.mech.I / p.mech.Gamma_phi);
  if (!(cfg.reduced_max_step > 0.0)) r.fail("integrator.reduced_max_step", "must be > 0");

  cfg.out_dir = r.raw("output.dir").value_or(".");
  cfg.emit_svg = r.boolean("output.svg", false);
  return cfg;
}

void json_to_tree(const nlohmann::json& j, pt::ptree& tree) {
  if (!j.is_object()) throw ConfigParseError("manifest config must be an object of sections", 0);
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) {
      throw ConfigParseError("manifest config section '" + section + "' must be an object", 0);
    }
    pt::ptree sub;
    for (const auto& [key, value] : body.items()) {
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_boolean()) {
        text = value.get<bool>() ? "true" : "false";
      } else if (value.is_number_integer()) {
        text = std::to_string(value.get<long long>());
      } else if (value.is_number()) {
        text = format_number(value.get<double>());
      } else {
        throw ConfigParseError("manifest config value " + section + "." + key +
                                   " must be a string, number or boolean",
                               0);
      }
      sub.put(pt::ptree::path_type(key, '\0'), text);
    }
    tree.add_child(pt::ptree::path_type(section, '\0'), sub);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot open config file " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ConfigError::ConfigError(const std::string& key, const std::string& what, std::size_t line)
    : std::runtime_error(compose_message(key, what, line)), key_(key), line_(line) {}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::TorqueCurve: return "TorqueCurve";
    case Experiment::Bifurcation: return "Bifurcation";
    case Experiment::TimeEvolution: return "TimeEvolution";
    case Experiment::PhaseDiagram: return "PhaseDiagram";
    case Experiment::Spectra: return "Spectra";
    case Experiment::Asymmetry: return "Asymmetry";
    case Experiment::Threshold: return "Threshold";
    case Experiment::OracleCheck: return "OracleCheck";
  }
  return "?";
}

std::string experiment_file_stem(Experiment e) {
  switch (e) {
    case Experiment::TorqueCurve: return "torque-curve";
    case Experiment::Bifurcation: return "bifurcation";
    case Experiment::TimeEvolution: return "time-evolution";
    case Experiment::PhaseDiagram: return "phase-diagram";
    case Experiment::Spectra: return "spectra";
    case Experiment::Asymmetry: return "asymmetry";
    case Experiment::Threshold: return "threshold";
    case Experiment::OracleCheck: return "oracle-check";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(const std::string& s) {
  for (int i = 0; i <= int(Experiment::OracleCheck); ++i) {
    const auto e = Experiment(i);
    if (s == experiment_name(e) || s == experiment_file_stem(e)) return e;
  }
  return std::nullopt;
}

Grid parse_grid(const std::string& text) {
  Grid g;
  g.text = trim(text);
  auto number = [&](std::string_view part) {
    const auto t = trim(part);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad grid value '" + t + "' in '" + g.text + "'");
    }
    return v;
  };
  if (g.text.empty()) throw std::invalid_argument("empty grid");
  if (g.text.find(':') != std::string::npos) {
    const auto a = g.text.find(':');
    const auto b = g.text.find(':', a + 1);
    if (b == std::string::npos || g.text.find(':', b + 1) != std::string::npos) {
      throw std::invalid_argument("range must be start:stop:count, got '" + g.text + "'");
    }
    const double start = number(std::string_view(g.text).substr(0, a));
    const double stop = number(std::string_view(g.text).substr(a + 1, b - a - 1));
    const double count = number(std::string_view(g.text).substr(b + 1));
    if (count < 1 || count != std::floor(count) || count > 1e7) {
      throw std::invalid_argument("range count must be a positive integer in '" + g.text + "'");
    }
    const auto n = std::size_t(count);
    if (n == 1) {
      if (start != stop) throw std::invalid_argument("a one-point range needs start == stop");
      g.values = {start};
      return g;
    }
    g.values.resize(n);
    const double last = double(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      // Weighted form keeps ranges like -a:a:n exactly antisymmetric.
      g.values[i] = (double(n - 1 - i) * start + double(i) * stop) / last;
    }
    return g;
  }
  std::size_t pos = 0;
  while (pos <= g.text.size()) {
    const auto comma = std::min(g.text.find(',', pos), g.text.size());
    g.values.push_back(number(std::string_view(g.text).substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return g;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigParseError(origin + ":" + std::to_string(e.line()) + ": " + e.message(), e.line());
  }
  return build(tree, key_lines(text));
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() != ".json") return parse_config(text, path.string());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = std::size_t(std::count(text.begin(), text.begin() + long(upto), '\n')) + 1;
    throw ConfigParseError(path.string() + ":" + std::to_string(line) + ": " + e.what(), line);
  }
  pt::ptree tree;
  json_to_tree(j.contains("config") ? j.at("config") : j, tree);
  return build(tree, {});
}

std::map<std::string, std::map<std::string, std::string>> resolved_entries(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const auto& s = cfg.settings;
  const auto& ic = cfg.integrator;
  const auto num = [](double v) { return format_number(v); };
  std::map<std::string, std::map<std::string, std::string>> out;

  out["optical"] = {{"m", std::to_string(p.optical.m)},
                    {"gamma", num(p.optical.gamma)},
                    {"kappa_ex", num(p.optical.kappa_ex)},
                    {"J", num(p.optical.J)}};

  auto& d = out["drive"];
  d["Delta"] = num(p.drive.Delta);
  switch (cfg.drive_spec) {
    case DriveSpec::S_mag: d["S_mag"] = num(cfg.drive_value); break;
    case DriveSpec::n0: d["n0"] = num(cfg.drive_value); break;
    case DriveSpec::n0_over_nth: d["n0_over_nth"] = num(cfg.drive_value); break;
  }
  d["pump_mode"] = pump_mode_name(p.drive.pump_mode);
  if (const auto* fo = std::get_if<FrequencyOffset>(&p.drive.pump_mode)) {
    d["delta_pump"] = num(fo->delta_pump);
  }
  if (const auto* fp = std::get_if<FixedPhase>(&p.drive.pump_mode)) d["chi"] = num(fp->chi);

  out["mech"] = {{"I", num(p.mech.I)}, {"Gamma_phi", num(p.mech.Gamma_phi)}};

  auto& e = out["experiment"];
  if (cfg.experiment) e["experiment"] = experiment_name(*cfg.experiment);
  e["mu_values"] = s.mu_values.text;
  e["doppler_grid"] = s.doppler_grid.text;
  e["mu_grid"] = s.mu_grid.text;
  e["delta_grid"] = s.delta_grid.text;
  e["probe_grid"] = s.probe_grid.text;
  e["seeds"] = s.seeds.text;
  e["J_values"] = s.J_values.text;
  e["oracle_doppler"] = s.oracle_doppler.text;
  e["doppler"] = num(s.doppler);
  e["t_end"] = num(s.t_end);
  e["samples"] = std::to_string(s.samples);
  e["model"] = s.model;
  e["weak"] = s.weak ? "true" : "false";

  out["integrator"] = {{"rel_tol", num(ic.rel_tol)},
                       {"abs_tol", num(ic.abs_tol)},
                       {"max_step", num(ic.max_step)},
                       {"sample_dt", num(ic.sample_dt)},
                       {"time_budget", num(ic.time_budget)},
                       {"reduced_max_step", num(cfg.reduced_max_step)}};
  out["output"] = {{"dir", cfg.out_dir.string()}, {"svg", cfg.emit_svg ? "true" : "false"}};
  return out;
}

}  // namespace chiral
