#include "chiral/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chiral/parallel.hpp"
#include "chiral/steadystate.hpp"
#include "chiral/theory.hpp"

namespace chiral {
namespace {

using cplx = std::complex<double>;

double sideband_detuning(Direction d, double Delta_p, double Omega_star, const SystemParams& p) {
  return Delta_p - channel_center(d, Omega_star, p);
}

}  // namespace

int sideband_sign(Direction d) { return d == Direction::Plus ? 1 : -1; }

double channel_center(Direction d, double Omega_star, const SystemParams& p) {
  return sideband_sign(d) * 2.0 * p.optical.m * Omega_star;
}

cplx backscatter_amplitude(Direction d, double Delta_p, double Omega_star, const SystemParams& p) {
  const double g = p.optical.gamma;
  const double J = p.optical.J;
  const double shifted = sideband_detuning(d, Delta_p, Omega_star, p);
  const cplx den = cplx(g, -Delta_p) * cplx(g, -shifted) + J * J;
  return cplx(0.0, -p.optical.kappa_ex * J) / den;
}

double backscatter_power_weak(Direction d, double Delta_p, double Omega_star,
                              const SystemParams& p) {
  const double g2 = p.optical.gamma * p.optical.gamma;
  const double kJ = p.optical.kappa_ex * p.optical.J;
  const double shifted = sideband_detuning(d, Delta_p, Omega_star, p);
  return kJ * kJ / ((g2 + Delta_p * Delta_p) * (g2 + shifted * shifted));
}

cplx transmission_amplitude(Direction d, double Delta_p, double Omega_star, const SystemParams& p) {
  const double g = p.optical.gamma;
  const double J = p.optical.J;
  const double shifted = sideband_detuning(d, Delta_p, Omega_star, p);
  const cplx self_energy = J * J / cplx(g, -shifted);
  return 1.0 - p.optical.kappa_ex / (cplx(g, -Delta_p) + self_energy);
}

std::vector<double> ProbeConfig::default_grid(double gamma) {
  constexpr std::size_t n = 4001;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Integer offsets from the center keep the grid exactly symmetric.
    const double k = double(i) - double(n / 2);
    grid[i] = 3.0 * gamma * k / double(n / 2);
  }
  return grid;
}

void ProbeConfig::validate() const {
  if (detuning_grid.empty()) throw std::invalid_argument("probe detuning grid is empty");
  for (std::size_t i = 1; i < detuning_grid.size(); ++i) {
    if (!(detuning_grid[i] > detuning_grid[i - 1])) {
      throw std::invalid_argument("probe detuning grid must be strictly ascending");
    }
  }
  if (!std::isfinite(Omega_star)) throw std::invalid_argument("Omega_star must be finite");
}

Spectrum spectra(const ProbeConfig& cfg, const SystemParams& p) {
  cfg.validate();
  const std::size_t n = cfg.detuning_grid.size();
  Spectrum s;
  s.detunings = cfg.detuning_grid;
  s.R_plus.resize(n);
  s.R_minus.resize(n);
  s.T_plus.resize(n);
  s.T_minus.resize(n);
  s.A_R.resize(n);
  s.A_R_undefined.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = cfg.detuning_grid[i];
    if (cfg.use_weak_approx) {
      s.R_plus[i] = backscatter_power_weak(Direction::Plus, dp, cfg.Omega_star, p);
      s.R_minus[i] = backscatter_power_weak(Direction::Minus, dp, cfg.Omega_star, p);
    } else {
      s.R_plus[i] = std::norm(backscatter_amplitude(Direction::Plus, dp, cfg.Omega_star, p));
      s.R_minus[i] = std::norm(backscatter_amplitude(Direction::Minus, dp, cfg.Omega_star, p));
    }
    s.T_plus[i] = std::norm(transmission_amplitude(Direction::Plus, dp, cfg.Omega_star, p));
    s.T_minus[i] = std::norm(transmission_amplitude(Direction::Minus, dp, cfg.Omega_star, p));
    const double total = s.R_plus[i] + s.R_minus[i];
    if (total < kAsymmetryFloor) {
      s.A_R[i] = 0.0;
      s.A_R_undefined[i] = true;
    } else {
      s.A_R[i] = (s.R_plus[i] - s.R_minus[i]) / total;
    }
  }
  return s;
}

Peak locate_peak(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("locate_peak needs equal, non-empty samples");
  }
  const auto it = std::max_element(y.begin(), y.end());
  const std::size_t i = static_cast<std::size_t>(it - y.begin());
  Peak peak{x[i], y[i], 0.0};
  if (x.size() < 3) return peak;
  if (i == 0 || i + 1 == x.size()) {
    peak.uncertainty = i == 0 ? x[1] - x[0] : x[i] - x[i - 1];
    return peak;
  }
  const double h_left = x[i] - x[i - 1];
  const double h_right = x[i + 1] - x[i];
  peak.uncertainty = std::max(h_left, h_right);
  // Vertex of the parabola through the three samples.
  const double d1 = (y[i] - y[i - 1]) / h_left;
  const double d2 = (y[i + 1] - y[i]) / h_right;
  const double curvature = (d2 - d1) / (0.5 * (h_left + h_right));
  if (curvature < 0.0) {
    const double slope_mid = (d1 * h_right + d2 * h_left) / (h_left + h_right);
    const double shift = -slope_mid / curvature;
    if (std::abs(shift) <= peak.uncertainty) {
      peak.location = x[i] + shift;
      peak.value = y[i] - 0.5 * slope_mid * slope_mid / curvature;
    }
  }
  return peak;
}

AsymmetryCurve max_asymmetry_vs_power(std::span<const double> mu_grid, const SystemParams& p,
                                      std::span<const double> detuning_grid,
                                      bool use_weak_approx) {
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  if (!(D > 0.0 && D < g)) {
    throw std::domain_error("asymmetry curve requires 0 < Delta < gamma");
  }
  const auto bif = branch(mu_grid, p);
  AsymmetryCurve out;
  out.mu_grid = bif.mu_grid;
  out.omega_star = bif.omega_star;
  out.max_abs_asymmetry.resize(mu_grid.size());
  out.argmax_detuning.resize(mu_grid.size());
  ProbeConfig probe;
  probe.detuning_grid = detuning_grid.empty()
                            ? ProbeConfig::default_grid(g)
                            : std::vector<double>(detuning_grid.begin(), detuning_grid.end());
  probe.use_weak_approx = use_weak_approx;
  parallel_for(mu_grid.size(), [&](std::size_t i) {
    ProbeConfig local = probe;
    local.Omega_star = out.omega_star[i];
    const auto s = spectra(local, p);
    double best = 0.0;
    double where = 0.0;
    for (std::size_t k = 0; k < s.A_R.size(); ++k) {
      if (std::abs(s.A_R[k]) > best) {
        best = std::abs(s.A_R[k]);
        where = s.detunings[k];
      }
    }
    out.max_abs_asymmetry[i] = best;
    out.argmax_detuning[i] = where;
  });
  return out;
}

}  // namespace chiral
