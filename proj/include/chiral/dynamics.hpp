#pragma once

// Mean-field equations of motion for the driven doublet coupled to the rotor,
// the reduced rotor equation, and a brute-force time-averaged torque oracle
// used to check the closed-form torque law.

#include <complex>
#include <stdexcept>
#include <vector>

#include "chiral/params.hpp"
#include "chiral/theory.hpp"

namespace chiral {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.01;   ///< in units of 1/gamma for the default gamma = 1
  double sample_dt = 0.0;   ///< trajectory output spacing; 0 records every accepted step
  double time_budget = 1e5; ///< longest integration the torque oracle may request

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FieldState> states;
  std::vector<DerivedObservables> observables;

  std::size_t size() const { return times.size(); }
  const FieldState& final_state() const { return states.back(); }
};

/// Integration failure. Carries the last state the integrator accepted.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_time, FieldState last_state)
      : std::runtime_error(what), last_time_(last_time), last_state_(last_state) {}

  double last_time() const { return last_time_; }
  const FieldState& last_state() const { return last_state_; }

 private:
  double last_time_;
  FieldState last_state_;
};

struct FieldDerivative {
  std::complex<double> d_alpha_plus{};
  std::complex<double> d_alpha_minus{};
  double d_phi = 0.0;
  double d_Omega = 0.0;
};

enum class ActivePumps { Both, PlusOnly, MinusOnly };

struct PumpAmplitudes {
  std::complex<double> plus{};
  std::complex<double> minus{};
};

/// S+(t) and S-(t) for the configured pump mode. PhaseAveraged yields its
/// chi = 0 member; SinglePumpSuperposition yields both pumps unless one is
/// switched off through `active`.
PumpAmplitudes pump_amplitudes(double t, const SystemParams& p,
                               ActivePumps active = ActivePumps::Both);

/// Equations of motion with explicit pump amplitudes.
FieldDerivative rhs_driven(const FieldState& s, PumpAmplitudes pumps, const SystemParams& p);

/// Equations of motion with the pumps of p.drive evaluated at time t.
FieldDerivative rhs_full(const FieldState& s, double t, const SystemParams& p,
                         ActivePumps active = ActivePumps::Both);

/// Integrates the full mean-field model. Only FrequencyOffset and FixedPhase
/// pumping define a single deterministic realization; the ensemble modes
/// throw std::invalid_argument. Throws IntegrationError on step-size underflow
/// or a non-finite state.
Trajectory integrate_full(const FieldState& s0, double t_end, const SystemParams& p,
                          const IntegratorConfig& cfg);

/// Integrates I dOmega/dt = tau_rec(Omega) - Gamma_phi Omega with phi = int Omega dt.
/// Field amplitudes in the returned states are zero; observables report the
/// unperturbed photon numbers n0 per direction and tau_rec as the torque.
Trajectory integrate_reduced(double Omega0, double t_end, const SystemParams& p,
                             const IntegratorConfig& cfg);

struct TorqueOracleResult {
  double Omega = 0.0;
  double tau_avg = 0.0;
  double tau_analytic = 0.0;
  double rel_err = 0.0;
};

/// Clamps phi(t) = Omega t, integrates the optical equations past the transient
/// and averages the instantaneous torque over an integer number of Doppler
/// periods. Throws std::runtime_error when the averaging window exceeds
/// cfg.time_budget.
TorqueOracleResult time_averaged_torque_oracle(double Omega, const SystemParams& p,
                                               const IntegratorConfig& cfg);

}  // namespace chiral
