#include "chiral/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chiral {
namespace {

double lorentz_denominator(const SystemParams& p) {
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  return g * g + D * D;
}

std::complex<double> recoil_phase(double m, double phi) {
  return std::polar(1.0, 2.0 * m * phi);
}

}  // namespace

double photon_number_n0(const SystemParams& p) {
  const double S = p.drive.S_mag;
  return S * S / lorentz_denominator(p);
}

double interaction_energy(const FieldState& s, const SystemParams& p) {
  const auto z = recoil_phase(p.optical.m, s.phi) * std::conj(s.alpha_minus) * s.alpha_plus;
  return 2.0 * p.optical.J * z.real();
}

double instantaneous_torque(const FieldState& s, const SystemParams& p) {
  const auto z = recoil_phase(p.optical.m, s.phi) * std::conj(s.alpha_minus) * s.alpha_plus;
  return 4.0 * p.optical.m * p.optical.J * z.imag();
}

DerivedObservables observe(const FieldState& s, const SystemParams& p) {
  DerivedObservables o;
  o.n_plus = std::norm(s.alpha_plus);
  o.n_minus = std::norm(s.alpha_minus);
  o.N = o.n_plus + o.n_minus;
  o.L_opt = p.optical.m * (o.n_plus - o.n_minus);
  o.tau_inst = instantaneous_torque(s, p);
  o.L_phi = p.mech.I * s.Omega;
  return o;
}

double recoil_amplitude(const SystemParams& p) {
  const auto& o = p.optical;
  return 4.0 * o.m * o.gamma * o.J * o.J * photon_number_n0(p);
}

double tau_rec(double Omega, const SystemParams& p) {
  const double g2 = p.optical.gamma * p.optical.gamma;
  const double D = p.drive.Delta;
  const double doppler = 2.0 * p.optical.m * Omega;
  const double lower = D - doppler;
  const double upper = D + doppler;
  return recoil_amplitude(p) * (1.0 / (g2 + lower * lower) - 1.0 / (g2 + upper * upper));
}

double gamma_opt(const SystemParams& p) {
  const auto& o = p.optical;
  const double den = lorentz_denominator(p);
  return 32.0 * o.m * o.m * o.gamma * o.J * o.J * photon_number_n0(p) * p.drive.Delta /
         (den * den);
}

std::optional<double> n_threshold(const SystemParams& p) {
  const auto& o = p.optical;
  const double D = p.drive.Delta;
  if (!(D > 0.0) || !(o.J > 0.0)) return std::nullopt;
  const double den = lorentz_denominator(p);
  return p.mech.Gamma_phi * den * den / (32.0 * o.m * o.m * o.gamma * o.J * o.J * D);
}

double cubic_coeff(const SystemParams& p) {
  const double m = p.optical.m;
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  const double den = lorentz_denominator(p);
  return 8.0 * gamma_opt(p) * m * m * (g * g - D * D) / (den * den);
}

NormalFormCoeffs normal_form_coeffs(const SystemParams& p) {
  NormalFormCoeffs c;
  c.Gamma_opt = gamma_opt(p);
  c.u_opt = cubic_coeff(p);
  c.r = c.Gamma_opt - p.mech.Gamma_phi;
  c.n_th = n_threshold(p);
  if (c.n_th) c.mu = photon_number_n0(p) / *c.n_th;
  return c;
}

double omega_star_normal_form(double mu, const SystemParams& p) {
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  if (!(D > 0.0 && D < g)) {
    throw std::domain_error("normal-form branch requires 0 < Delta < gamma");
  }
  if (!(mu >= 1.0)) throw std::domain_error("normal-form branch requires mu >= 1");
  const double prefactor =
      (g * g + D * D) / (2.0 * p.optical.m * std::sqrt(2.0 * (g * g - D * D)));
  return prefactor * std::sqrt(mu - 1.0);
}

double optimal_detuning(const SystemParams& p) {
  return p.optical.gamma * std::numbers::inv_sqrt3;
}

}  // namespace chiral
