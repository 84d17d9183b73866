#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chiral/config.hpp"
#include "chiral/run.hpp"
#include "chiral/steadystate.hpp"
#include "chiral/theory.hpp"

using namespace chiral;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"([optical]
m = 10
J = 0.1

[drive]
Delta = 0.5773502691896258
n0_over_nth = 1.5
)";

fs::path scratch_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("chiral_test_config_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

// Header cells may carry a unit suffix such as "Omega[gamma]".
std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i].substr(0, header[i].find('[')) == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("minimal config materializes defaults") {
  const auto cfg = parse_config(kMinimal);
  CHECK(cfg.params.optical.m == 10);
  CHECK(cfg.params.optical.gamma == 1.0);
  CHECK(cfg.params.optical.kappa_ex == 1.0);
  CHECK(cfg.params.mech.I == 1e4);
  CHECK(cfg.params.mech.Gamma_phi == 1.0);
  CHECK(cfg.integrator.rel_tol == 1e-9);
  CHECK(cfg.integrator.abs_tol == 1e-12);
  CHECK(cfg.integrator.max_step == 0.01);
  CHECK(cfg.drive_spec == DriveSpec::n0_over_nth);
  CHECK(std::holds_alternative<PhaseAveraged>(cfg.params.drive.pump_mode));
  CHECK(!cfg.experiment.has_value());
  // n0 = 1.5 n_th
  CHECK(photon_number_n0(cfg.params) == doctest::Approx(1.5 * 0.096225044864937627).epsilon(1e-12));
}

TEST_CASE("config errors carry key and line") {
  SUBCASE("m = 0") {
    const std::string text = "[optical]\nm = 0\nJ = 0.1\n[drive]\nDelta = 0.5\nS_mag = 1\n";
    try {
      parse_config(text);
      FAIL("accepted m = 0");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "optical.m");
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("two drive keys") {
    const std::string text = "[optical]\nm = 3\n[drive]\nDelta = 0.5\nS_mag = 1\nn0 = 2\n";
    try {
      parse_config(text);
      FAIL("accepted S_mag and n0 together");
    } catch (const ConfigError& e) {
      CHECK(e.key().rfind("drive.", 0) == 0);
      CHECK(e.line() >= 5);
    }
  }
  SUBCASE("unknown key") {
    const std::string text = "[optical]\nm = 3\nfoo = 1\n[drive]\nDelta = 0.5\nS_mag = 1\n";
    try {
      parse_config(text);
      FAIL("accepted unknown key");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "optical.foo");
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("unknown section") {
    CHECK_THROWS_AS(parse_config("[bogus]\nx = 1\n[drive]\nDelta = 1\nS_mag = 1\n"), ConfigError);
  }
  SUBCASE("missing Delta") {
    CHECK_THROWS_AS(parse_config("[drive]\nS_mag = 1\n"), ConfigError);
  }
  SUBCASE("no drive amplitude") {
    CHECK_THROWS_AS(parse_config("[drive]\nDelta = 1\n"), ConfigError);
  }
  SUBCASE("threshold ratio on the damping side") {
    CHECK_THROWS_AS(parse_config("[drive]\nDelta = -0.5\nn0_over_nth = 1.5\n"), ConfigError);
  }
  SUBCASE("delta_pump without FrequencyOffset") {
    CHECK_THROWS_AS(parse_config("[drive]\nDelta = 0.5\nS_mag = 1\ndelta_pump = 0.1\n"),
                    ConfigError);
  }
  SUBCASE("malformed") {
    try {
      parse_config("[optical\nm = 3\n");
      FAIL("accepted malformed text");
    } catch (const ConfigParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("not a number") {
    CHECK_THROWS_AS(parse_config("[drive]\nDelta = abc\nS_mag = 1\n"), ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/chiral.ini"), ConfigParseError);
  }
}

TEST_CASE("parse_grid") {
  const auto g = parse_grid("-3:3:7");
  REQUIRE(g.values.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(g.values[i] == double(i) - 3.0);

  const auto odd = parse_grid("-0.7:0.7:4001");
  for (std::size_t i = 0; i < odd.values.size(); ++i)
    CHECK(odd.values[i] == -odd.values[odd.values.size() - 1 - i]);
  CHECK(odd.values[2000] == 0.0);

  const auto list = parse_grid("0.5, 1.5,2");
  CHECK(list.values == std::vector<double>{0.5, 1.5, 2.0});
  CHECK(parse_grid("4:4:1").values == std::vector<double>{4.0});
  CHECK_THROWS(parse_grid("1:2"));
  CHECK_THROWS(parse_grid("1:2:0"));
  CHECK_THROWS(parse_grid(""));
  CHECK_THROWS(parse_grid("1,,2"));
}

TEST_CASE("resolved entries round-trip through the loader") {
  auto cfg = parse_config(std::string(kMinimal) + "pump_mode = FrequencyOffset\n");
  cfg.experiment = Experiment::Bifurcation;
  const auto entries = resolved_entries(cfg);
  CHECK(entries.at("optical").at("gamma") == "1");
  CHECK(entries.at("integrator").at("rel_tol") == "1e-09");

  std::string text;
  for (const auto& [section, kv] : entries) {
    text += "[" + section + "]\n";
    for (const auto& [k, v] : kv) text += k + " = " + v + "\n";
  }
  const auto again = parse_config(text);
  CHECK(resolved_entries(again) == entries);
  CHECK(again.experiment == Experiment::Bifurcation);
}

TEST_CASE("threshold output") {
  auto cfg = parse_config(kMinimal);
  cfg.experiment = Experiment::Threshold;
  const auto files = compute_outputs(cfg);
  REQUIRE(files.size() == 1);
  CHECK(files[0].name == "threshold.csv");
  const auto rows = csv_rows(files[0].content);
  REQUIRE(rows.size() == 2);
  const double n_th = std::stod(rows[1][column(rows[0], "n_th")]);
  const double d_opt = std::stod(rows[1][column(rows[0], "Delta_opt")]);
  CHECK(std::abs(n_th - 0.096225044864937627) <= 1e-12 * n_th);
  CHECK(std::abs(d_opt - 1.0 / std::sqrt(3.0)) <= 1e-12);
}

TEST_CASE("torque-curve roots agree with the root finder") {
  auto cfg = parse_config(kMinimal);
  cfg.experiment = Experiment::TorqueCurve;
  const auto files = compute_outputs(cfg);
  REQUIRE(files.size() == 2);
  CHECK(files[0].name == "torque-curve.csv");
  CHECK(files[1].name == "torque-curve-roots.csv");

  const auto roots = csv_rows(files[1].content);
  const std::size_t c_mu = column(roots[0], "mu"), c_om = column(roots[0], "Omega"),
                    c_st = column(roots[0], "stable");
  std::size_t checked = 0;
  for (double mu : {0.5, 1.5}) {
    const auto p = with_photon_number(cfg.params, mu * *n_threshold(cfg.params));
    const auto set = find_steady_rotations(p);
    std::vector<double> from_csv;
    for (std::size_t r = 1; r < roots.size(); ++r)
      if (std::stod(roots[r][c_mu]) == mu) from_csv.push_back(std::stod(roots[r][c_om]));
    REQUIRE(from_csv.size() == set.roots.size());
    for (std::size_t k = 0; k < set.roots.size(); ++k) {
      CHECK(std::abs(from_csv[k] - set.roots[k].Omega) <= 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 1 + 3);

  // the tabulated damping-minus-torque changes sign between samples that bracket each nonzero root
  const auto curve = csv_rows(files[0].content);
  const std::size_t k_mu = column(curve[0], "mu"), k_om = column(curve[0], "Omega"),
                    k_tau = column(curve[0], "tau_rec"), k_d = column(curve[0], "damping");
  std::vector<double> om, bal;
  for (std::size_t r = 1; r < curve.size(); ++r) {
    if (std::stod(curve[r][k_mu]) != 1.5) continue;
    om.push_back(std::stod(curve[r][k_om]));
    bal.push_back(std::stod(curve[r][k_tau]) - std::stod(curve[r][k_d]));
  }
  std::size_t sign_changes = 0;
  for (std::size_t i = 1; i < om.size(); ++i) {
    if (bal[i - 1] > 0 && bal[i] <= 0) {
      ++sign_changes;
      bool bracketed = false;
      for (std::size_t r = 1; r < roots.size(); ++r) {
        if (std::stod(roots[r][c_mu]) != 1.5 || roots[r][c_st] != "1") continue;
        const double w = std::stod(roots[r][c_om]);
        bracketed |= om[i - 1] <= w && w <= om[i];
      }
      CHECK(bracketed);
    }
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("deterministic outputs and manifest re-run") {
  auto cfg = parse_config(kMinimal);
  cfg.experiment = Experiment::Bifurcation;
  cfg.settings.mu_grid = parse_grid("0:2:41");
  const auto a = compute_outputs(cfg);
  const auto b = compute_outputs(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].content == b[i].content);

  const auto dir1 = scratch_dir("run1");
  cfg.out_dir = dir1;
  const auto m1 = run(cfg);
  const auto manifest = nlohmann::json::parse(slurp(dir1 / "manifest.json"));
  CHECK(manifest.at("tool") == kToolName);
  CHECK(manifest.at("experiment") == "Bifurcation");
  REQUIRE(manifest.at("outputs").size() == m1.outputs.size());
  for (const auto& o : m1.outputs) CHECK(sha256_hex(slurp(dir1 / o.name)) == o.sha256);

  auto again = load_config(dir1 / "manifest.json");
  const auto dir2 = scratch_dir("run2");
  again.out_dir = dir2;
  const auto m2 = run(again);
  REQUIRE(m2.outputs.size() == m1.outputs.size());
  for (std::size_t i = 0; i < m1.outputs.size(); ++i) {
    CHECK(m2.outputs[i].name == m1.outputs[i].name);
    CHECK(m2.outputs[i].sha256 == m1.outputs[i].sha256);
  }
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("sha256 and error record") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto rec = nlohmann::json::parse(error_record("config", "optical.m: bad", "optical.m", 2));
  CHECK(rec.at("status") == "error");
  CHECK(rec.at("kind") == "config");
  CHECK(rec.at("key") == "optical.m");
  CHECK(rec.at("line") == 2);
  const auto bare = nlohmann::json::parse(error_record("runtime", "x"));
  CHECK(!bare.contains("key"));
  CHECK(!bare.contains("line"));
}
