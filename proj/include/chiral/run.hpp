#pragma once

// Experiment orchestration: computes an experiment's tables, writes CSV (and
// optional SVG) files plus manifest.json into the output directory.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chiral/config.hpp"
#include "chiral/properties.hpp"

namespace chiral {

inline constexpr const char* kToolName = "chiralrot";
inline constexpr const char* kToolVersion = "0.1.0";

struct OutputFile {
  std::string name;
  std::string content;
};

struct OutputRecord {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string experiment;
  std::map<std::string, std::map<std::string, std::string>> config;
  std::map<std::string, double> derived;  ///< n0, n_th, ... (NaN when undefined)
  std::string started_utc;
  double wall_clock_seconds = 0.0;
  std::vector<OutputRecord> outputs;

  std::string to_json() const;
};

std::string sha256_hex(std::string_view data);

/// Pure computation of every output file of cfg's experiment, in write order.
/// Throws if cfg.experiment is unset.
std::vector<OutputFile> compute_outputs(const RunConfig& cfg);

/// compute_outputs, then writes the files and manifest.json to cfg.out_dir.
RunManifest run(const RunConfig& cfg);

struct ValidateReport {
  std::vector<PropertyResult> results;
  bool all_passed() const;
};

/// Library property suite plus determinism and manifest re-run checks of this
/// module. Writes validate.csv to out_dir when it is non-empty.
ValidateReport run_validate(const PropertySuiteOptions& opts, const std::filesystem::path& out_dir);

/// One-line JSON error record: {"status":"error","kind":...,"message":...}.
/// `key` and `line` are omitted when empty / 0.
std::string error_record(const std::string& kind, const std::string& message,
                         const std::string& key = {}, std::size_t line = 0);

}  // namespace chiral
