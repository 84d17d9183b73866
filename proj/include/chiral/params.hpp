#pragma once

// Model constants for a single whispering-gallery doublet with a movable
// backscatterer. Units: hbar = 1, every rate in the same reference unit
// (gamma = 1 by default), angular momenta in units of hbar.

#include <string>
#include <variant>

namespace chiral {

struct OpticalParams {
  int m = 10;             ///< azimuthal mode index, >= 1
  double gamma = 1.0;     ///< optical half-linewidth kappa/2
  double kappa_ex = 1.0;  ///< external coupling rate, 0 < kappa_ex <= 2 gamma
  double J = 0.1;         ///< coherent CW-CCW backscattering rate
};

/// Pump phase averaged over a uniform grid of relative phases (frozen
/// mechanics only).
struct PhaseAveraged {};
/// Each pump run on its own and the resulting torques summed (frozen
/// mechanics only).
struct SinglePumpSuperposition {};
/// The minus pump is offset in frequency by delta_pump, so the standing-wave
/// lattice drifts and averages out on the mechanical time scale.
struct FrequencyOffset {
  double delta_pump = 0.0;
};
/// Coherent pumps with a fixed relative phase chi.
struct FixedPhase {
  double chi = 0.0;
};

using PumpMode =
    std::variant<PhaseAveraged, SinglePumpSuperposition, FrequencyOffset, FixedPhase>;

struct DriveParams {
  double Delta = 0.0;  ///< pump detuning omega_L - omega_c
  double S_mag = 0.0;  ///< pump amplitude |S| per direction
  PumpMode pump_mode = PhaseAveraged{};
};

struct MechParams {
  double I = 1.0e4;        ///< moment of inertia
  double Gamma_phi = 1.0;  ///< angular damping (torque per unit angular velocity)
};

struct SystemParams {
  OpticalParams optical;
  DriveParams drive;
  MechParams mech;
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const SystemParams& p);

/// Pump amplitude that produces n0 photons per unperturbed pump.
double drive_for_photon_number(double n0, const SystemParams& p);

/// Copy of p with S_mag chosen so that the unperturbed photon number is n0.
SystemParams with_photon_number(SystemParams p, double n0);

/// Copy of p driven at n0 = mu * n_th. Throws std::domain_error when p has no
/// instability threshold (Delta <= 0 or J = 0).
SystemParams with_pump_ratio(SystemParams p, double mu);

/// delta_pump = sqrt(gamma Gamma_phi / I), clamped to [10 Gamma_phi / I, gamma / 10].
double default_pump_offset(const SystemParams& p);

std::string pump_mode_name(const PumpMode& mode);

}  // namespace chiral
