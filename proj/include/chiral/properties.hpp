#pragma once

// Randomized invariant checks over the library modules. Backs the `validate`
// subcommand and acceptance criterion 10.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chiral/params.hpp"

namespace chiral {

/// Draw from the property-test parameter box: m in [1, 50], gamma in [0.5, 2],
/// J/gamma in [0.001, 0.201], kappa_ex/gamma in [0.05, 2], Delta/gamma in [-3, 3],
/// |S| in [0, 2], I in [10, 1e5], Gamma_phi in [0.1, 10].
SystemParams random_params(std::mt19937_64& rng);

struct PropertyResult {
  std::string module;
  std::string name;
  std::size_t draws = 0;
  std::size_t failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;

  bool passed() const { return draws > 0 && failures == 0; }
};

struct PropertySuiteOptions {
  std::uint64_t seed = 20240611;
  /// Draws for the closed-form and root-finding properties.
  std::size_t draws = 1000;
  /// Draws for properties that integrate the optical equations.
  std::size_t trajectory_draws = 64;
  /// Draws for the full-model saturation check (about 10 s each).
  std::size_t full_model_draws = 1;
};

std::vector<PropertyResult> run_property_suite(const PropertySuiteOptions& opts = {});

}  // namespace chiral
