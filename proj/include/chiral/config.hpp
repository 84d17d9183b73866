#pragma once

// Run configuration: INI-style sections [optical] [drive] [mech] [experiment]
// [integrator] [output], or the "config" block of a previous manifest.json.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chiral/dynamics.hpp"
#include "chiral/params.hpp"

namespace chiral {

enum class Experiment {
  TorqueCurve,
  Bifurcation,
  TimeEvolution,
  PhaseDiagram,
  Spectra,
  Asymmetry,
  Threshold,
  OracleCheck,
};

std::string experiment_name(Experiment e);       ///< "Bifurcation"
std::string experiment_file_stem(Experiment e);  ///< "bifurcation"
std::optional<Experiment> parse_experiment(const std::string& s);  ///< either spelling

/// Unreadable or malformed file. `line` is 0 when unknown.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed file that violates a schema or model invariant. `key` is
/// "section.name" or empty for cross-key rules; `line` is 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what, std::size_t line = 0);
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

/// A list given as "a,b,c" or as an inclusive linear range "start:stop:count".
struct Grid {
  std::string text;
  std::vector<double> values;
};

Grid parse_grid(const std::string& text);

enum class DriveSpec { S_mag, n0, n0_over_nth };

struct ExperimentSettings {
  Grid mu_values{"0.5,1.5", {}};          ///< TorqueCurve
  Grid doppler_grid{"0:3:301", {}};       ///< 2m Omega / gamma; TorqueCurve
  Grid mu_grid{"0:3:301", {}};            ///< Bifurcation, PhaseDiagram, Asymmetry
  Grid delta_grid{"0.05:2:40", {}};       ///< Delta in rate units; PhaseDiagram
  Grid probe_grid{};                      ///< Delta_p in rate units; default 4001 points on +-3 gamma
  Grid seeds{"-0.01,0.01", {}};           ///< 2m Omega0 / gamma; TimeEvolution
  Grid J_values{"0.01,0.02,0.05", {}};    ///< OracleCheck
  Grid oracle_doppler{"0.05:3:20", {}};   ///< 2m Omega / gamma; OracleCheck
  double doppler = 0.84;                  ///< 2m Omega* / gamma; Spectra, asymmetry profile
  double t_end = 0.0;                     ///< TimeEvolution; 0 resolves to 30 I / Gamma_phi
  std::size_t samples = 2001;             ///< TimeEvolution output rows per seed
  std::string model = "reduced";          ///< TimeEvolution: reduced | full
  bool weak = false;                      ///< product-of-Lorentzians backscatter form
};

struct RunConfig {
  SystemParams params;
  DriveSpec drive_spec = DriveSpec::S_mag;
  double drive_value = 0.0;  ///< the value given for drive_spec
  std::optional<Experiment> experiment;  ///< may be left to the CLI subcommand
  ExperimentSettings settings;
  IntegratorConfig integrator;
  /// Step cap for the reduced rotor equation; 0 resolves to 0.01 I / Gamma_phi.
  double reduced_max_step = 0.0;
  std::filesystem::path out_dir = ".";
  bool emit_svg = false;
};

/// Reads an INI file, or a manifest.json when the path ends in ".json".
RunConfig load_config(const std::filesystem::path& path);

/// Parses INI text; `origin` names the source in error messages.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Every key of the resolved configuration as "section" -> "key" -> text,
/// defaults materialized. Feeding it back through the loader reproduces cfg.
std::map<std::string, std::map<std::string, std::string>> resolved_entries(const RunConfig& cfg);

}  // namespace chiral
