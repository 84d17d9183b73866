#pragma once

// Closed-form weak-scattering theory of the angular-recoil instability:
// reciprocal torque law, anti-damping slope, threshold, cubic normal form and
// the near-threshold branch. All functions are pure.

#include <complex>
#include <optional>

#include "chiral/params.hpp"

namespace chiral {

struct FieldState {
  std::complex<double> alpha_plus{};
  std::complex<double> alpha_minus{};
  double phi = 0.0;
  double Omega = 0.0;
};

struct DerivedObservables {
  double n_plus = 0.0;
  double n_minus = 0.0;
  double N = 0.0;
  double L_opt = 0.0;
  double tau_inst = 0.0;
  double L_phi = 0.0;
};

struct NormalFormCoeffs {
  double Gamma_opt = 0.0;
  double u_opt = 0.0;
  double r = 0.0;
  std::optional<double> n_th;
  std::optional<double> mu;
};

/// Unperturbed photon number per pump, |S|^2 / (gamma^2 + Delta^2).
double photon_number_n0(const SystemParams& p);

/// Mean-field interaction energy J (e^{2im phi} a-* a+ + c.c.).
double interaction_energy(const FieldState& s, const SystemParams& p);

/// Instantaneous recoil torque 4 m J Im[e^{2im phi} a-* a+].
double instantaneous_torque(const FieldState& s, const SystemParams& p);

DerivedObservables observe(const FieldState& s, const SystemParams& p);

/// Prefactor A_m = 4 m gamma J^2 n0 of the reciprocal torque.
double recoil_amplitude(const SystemParams& p);

/// Time-averaged torque on a uniformly rotating scatterer under reciprocal
/// incoherent driving. Odd in Omega and in Delta.
double tau_rec(double Omega, const SystemParams& p);

/// d tau_rec / d Omega at Omega = 0.
double gamma_opt(const SystemParams& p);

/// Photon number at which gamma_opt reaches Gamma_phi. Empty when the rest
/// state is stable at linear order for every pump power (Delta <= 0 or J = 0).
std::optional<double> n_threshold(const SystemParams& p);

/// u_opt in tau_rec = Gamma_opt Omega - u_opt Omega^3 + O(Omega^5).
double cubic_coeff(const SystemParams& p);

NormalFormCoeffs normal_form_coeffs(const SystemParams& p);

/// Square-root branch of the cubic normal form, valid near mu = 1 for
/// 0 < Delta < gamma. Throws std::domain_error outside that window or for mu < 1.
double omega_star_normal_form(double mu, const SystemParams& p);

/// Detuning that minimizes n_threshold: gamma / sqrt(3).
double optimal_detuning(const SystemParams& p);

}  // namespace chiral
