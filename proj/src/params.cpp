#include "chiral/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chiral/theory.hpp"

namespace chiral {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void validate(const SystemParams& p) {
  const auto& o = p.optical;
  const auto& d = p.drive;
  const auto& mech = p.mech;
  require(o.m >= 1, "optical.m must be an integer >= 1");
  require(std::isfinite(o.gamma) && o.gamma > 0.0, "optical.gamma must be > 0");
  require(std::isfinite(o.J) && o.J >= 0.0, "optical.J must be >= 0");
  require(std::isfinite(o.kappa_ex) && o.kappa_ex > 0.0 && o.kappa_ex <= 2.0 * o.gamma,
          "optical.kappa_ex must satisfy 0 < kappa_ex <= 2 gamma");
  require(std::isfinite(d.Delta), "drive.Delta must be finite");
  require(std::isfinite(d.S_mag) && d.S_mag >= 0.0, "drive.S_mag must be >= 0");
  if (const auto* fo = std::get_if<FrequencyOffset>(&d.pump_mode)) {
    require(fo->delta_pump > 0.0 && fo->delta_pump < o.gamma,
            "drive.delta_pump must satisfy 0 < delta_pump < gamma");
  }
  if (const auto* fp = std::get_if<FixedPhase>(&d.pump_mode)) {
    require(std::isfinite(fp->chi), "drive.chi must be finite");
  }
  require(std::isfinite(mech.I) && mech.I > 0.0, "mech.I must be > 0");
  require(std::isfinite(mech.Gamma_phi) && mech.Gamma_phi > 0.0, "mech.Gamma_phi must be > 0");
}

double drive_for_photon_number(double n0, const SystemParams& p) {
  if (!(n0 >= 0.0)) throw std::invalid_argument("photon number must be >= 0");
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  return std::sqrt(n0 * (g * g + D * D));
}

SystemParams with_photon_number(SystemParams p, double n0) {
  p.drive.S_mag = drive_for_photon_number(n0, p);
  return p;
}

SystemParams with_pump_ratio(SystemParams p, double mu) {
  const auto nth = n_threshold(p);
  if (!nth) throw std::domain_error("no instability threshold: requires Delta > 0 and J > 0");
  return with_photon_number(p, mu * *nth);
}

double default_pump_offset(const SystemParams& p) {
  const double mech_rate = p.mech.Gamma_phi / p.mech.I;
  const double g = p.optical.gamma;
  const double lo = 10.0 * mech_rate;
  const double hi = g / 10.0;
  const double geo = std::sqrt(g * mech_rate);
  if (lo > hi) return std::sqrt(lo * hi);  // no scale separation; pick the middle
  return std::clamp(geo, lo, hi);
}

std::string pump_mode_name(const PumpMode& mode) {
  struct Namer {
    std::string operator()(const PhaseAveraged&) const { return "PhaseAveraged"; }
    std::string operator()(const SinglePumpSuperposition&) const {
      return "SinglePumpSuperposition";
    }
    std::string operator()(const FrequencyOffset&) const { return "FrequencyOffset"; }
    std::string operator()(const FixedPhase&) const { return "FixedPhase"; }
  };
  return std::visit(Namer{}, mode);
}

}  // namespace chiral
