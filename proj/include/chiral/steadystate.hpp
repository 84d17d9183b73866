#pragma once

// Steady uniform rotations from the torque balance Gamma_phi Omega = tau_rec(Omega),
// their stability, the pitchfork branch versus pump ratio, and the
// (Delta, n0 / n_th) phase diagram.

#include <optional>
#include <span>
#include <vector>

#include "chiral/params.hpp"

namespace chiral {

struct SteadyRotation {
  double Omega = 0.0;
  bool stable = false;
  /// Set when d/dOmega of the torque balance vanishes at the root within the
  /// finite-difference resolution (the rest state exactly at threshold).
  bool marginal = false;
};

struct SteadyRotationSet {
  std::vector<SteadyRotation> roots;  ///< ascending; always contains Omega = 0
  std::optional<double> mu;           ///< n0 / n_th when a threshold exists
  SystemParams params;

  std::size_t stable_count() const;
  const SteadyRotation& rest() const;
  /// |Omega| of the attractor reached from an infinitesimal positive seed:
  /// 0 if the rest state is stable, otherwise the first stable root above 0.
  double selected_speed() const;
  /// Largest |Omega| among stable roots (0 if only the rest state is stable).
  double largest_stable_speed() const;
};

struct RootScanOptions {
  std::size_t grid_points = 4000;
  double rel_tol = 1e-12;
};

/// Upper end of the root scan, (|Delta| + 5 gamma) / (2m).
double scan_range(const SystemParams& p);

/// tau_rec(Omega) - Gamma_phi Omega.
double torque_balance(double Omega, const SystemParams& p);

SteadyRotationSet find_steady_rotations(const SystemParams& p, const RootScanOptions& opts = {});

struct BifurcationBranch {
  std::vector<double> mu_grid;
  std::vector<double> omega_star;   ///< selected steady speed, 0 below threshold
  std::vector<double> normal_form;  ///< square-root prediction; NaN where undefined
};

/// Throws std::domain_error if p has no threshold (Delta <= 0 or J = 0).
BifurcationBranch branch(std::span<const double> mu_grid, const SystemParams& p);

struct PhaseDiagramGrid {
  std::vector<double> delta_grid;
  std::vector<double> mu_grid;
  /// |2m Omega*| / gamma of the selected state, row-major [mu][delta].
  std::vector<double> doppler;
  /// Same normalization for the largest stable |Omega| (differs from `doppler`
  /// only in the bistable subcritical region Delta > gamma).
  std::vector<double> doppler_max_stable;
  std::vector<double> threshold_line;  ///< n_th(Delta)

  double at(std::size_t mu_index, std::size_t delta_index) const {
    return doppler[mu_index * delta_grid.size() + delta_index];
  }
};

PhaseDiagramGrid phase_diagram(std::span<const double> delta_grid,
                               std::span<const double> mu_grid, const SystemParams& p);

}  // namespace chiral
