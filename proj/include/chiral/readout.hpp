#pragma once

// Weak-probe linear response of the rotating scatterer: backscattered spectra
// for the two probe directions, their normalized asymmetry and the
// same-frequency transmission.

#include <complex>
#include <span>
#include <vector>

#include "chiral/params.hpp"

namespace chiral {

enum class Direction { Plus, Minus };

/// Sign s in the sideband detuning Delta_p - s * 2m Omega*: +1 for Plus, -1 for Minus.
int sideband_sign(Direction d);

/// Center of the Doppler-shifted Lorentzian factor: +2m Omega* (Plus), -2m Omega* (Minus).
double channel_center(Direction d, double Omega_star, const SystemParams& p);

/// Amplitude scattered into the opposite circulation channel.
std::complex<double> backscatter_amplitude(Direction d, double Delta_p, double Omega_star,
                                           const SystemParams& p);

/// |r|^2 in the weak-scattering product-of-Lorentzians form.
double backscatter_power_weak(Direction d, double Delta_p, double Omega_star,
                              const SystemParams& p);

/// Same-frequency through amplitude.
std::complex<double> transmission_amplitude(Direction d, double Delta_p, double Omega_star,
                                            const SystemParams& p);

struct ProbeConfig {
  std::vector<double> detuning_grid;
  double Omega_star = 0.0;
  bool use_weak_approx = false;

  /// 4001 points over [-3 gamma, 3 gamma].
  static std::vector<double> default_grid(double gamma);
  void validate() const;
};

struct Spectrum {
  std::vector<double> detunings;
  std::vector<double> R_plus;
  std::vector<double> R_minus;
  std::vector<double> T_plus;
  std::vector<double> T_minus;
  std::vector<double> A_R;  ///< 0 where undefined
  std::vector<bool> A_R_undefined;
};

/// Points where R+ + R- falls below this are flagged as undefined asymmetry.
inline constexpr double kAsymmetryFloor = 1e-30;

Spectrum spectra(const ProbeConfig& cfg, const SystemParams& p);

struct Peak {
  double location = 0.0;
  double value = 0.0;
  double uncertainty = 0.0;  ///< grid spacing at the peak
};

/// Grid argmax refined by a three-point parabola.
Peak locate_peak(std::span<const double> x, std::span<const double> y);

struct AsymmetryCurve {
  std::vector<double> mu_grid;
  std::vector<double> omega_star;
  std::vector<double> max_abs_asymmetry;
  std::vector<double> argmax_detuning;
};

/// For every pump ratio, the selected steady speed and max |A_R| over the
/// detuning grid (the default grid when `detuning_grid` is empty).
AsymmetryCurve max_asymmetry_vs_power(std::span<const double> mu_grid, const SystemParams& p,
                                      std::span<const double> detuning_grid = {},
                                      bool use_weak_approx = false);

}  // namespace chiral
