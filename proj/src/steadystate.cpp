#include "chiral/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chiral/parallel.hpp"
#include "chiral/theory.hpp"

namespace chiral {
namespace {

double bisect(double lo, double hi, double g_lo, const SystemParams& p, double rel_tol) {
  for (int iter = 0; iter < 200 && hi - lo > rel_tol * std::abs(0.5 * (lo + hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = torque_balance(mid, p);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double balance_slope(double Omega, double step, const SystemParams& p) {
  return (torque_balance(Omega + step, p) - torque_balance(Omega - step, p)) / (2.0 * step);
}

}  // namespace

std::size_t SteadyRotationSet::stable_count() const {
  return static_cast<std::size_t>(
      std::count_if(roots.begin(), roots.end(), [](const auto& r) { return r.stable; }));
}

const SteadyRotation& SteadyRotationSet::rest() const {
  for (const auto& r : roots)
    if (r.Omega == 0.0) return r;
  throw std::logic_error("steady rotation set without rest state");
}

double SteadyRotationSet::selected_speed() const {
  if (rest().stable) return 0.0;
  for (const auto& r : roots)
    if (r.Omega > 0.0 && r.stable) return r.Omega;
  return 0.0;
}

double SteadyRotationSet::largest_stable_speed() const {
  double best = 0.0;
  for (const auto& r : roots)
    if (r.stable) best = std::max(best, std::abs(r.Omega));
  return best;
}

double scan_range(const SystemParams& p) {
  return (std::abs(p.drive.Delta) + 5.0 * p.optical.gamma) / (2.0 * p.optical.m);
}

double torque_balance(double Omega, const SystemParams& p) {
  return tau_rec(Omega, p) - p.mech.Gamma_phi * Omega;
}

SteadyRotationSet find_steady_rotations(const SystemParams& p, const RootScanOptions& opts) {
  const std::size_t n = std::max<std::size_t>(opts.grid_points, 2000);
  const double range = scan_range(p);
  const double h = range / double(n - 1);
  const double fd_step = 1e-6 * range;

  std::vector<double> positive;
  const double slope0 = balance_slope(0.0, fd_step, p);
  double prev_omega = h;
  double prev_g = torque_balance(h, p);
  // A root inside the first grid cell shows up as a rising balance at rest
  // that is already negative at the first grid point.
  if (slope0 > 0.0 && prev_g < 0.0) {
    const double lo = h * 1e-9;
    positive.push_back(bisect(lo, h, torque_balance(lo, p), p, opts.rel_tol));
  }
  if (prev_g == 0.0) positive.push_back(h);
  for (std::size_t k = 2; k < n; ++k) {
    const double omega = range * double(k) / double(n - 1);
    const double g = torque_balance(omega, p);
    if (g == 0.0) {
      positive.push_back(omega);
    } else if (prev_g != 0.0 && (g > 0.0) != (prev_g > 0.0)) {
      positive.push_back(bisect(prev_omega, omega, prev_g, p, opts.rel_tol));
    }
    prev_omega = omega;
    prev_g = g;
  }

  SteadyRotationSet set;
  set.params = p;
  if (const auto nth = n_threshold(p)) set.mu = photon_number_n0(p) / *nth;

  const double marginal_tol = 1e-8 * std::max(p.mech.Gamma_phi, std::abs(gamma_opt(p)));
  SteadyRotation rest{0.0, slope0 < 0.0, false};
  if (std::abs(slope0) <= marginal_tol) {
    rest.stable = true;
    rest.marginal = true;
  }
  set.roots.push_back(rest);
  for (double omega : positive) {
    const bool stable = balance_slope(omega, fd_step, p) < 0.0;
    set.roots.push_back({omega, stable, false});
    set.roots.push_back({-omega, stable, false});
  }
  std::sort(set.roots.begin(), set.roots.end(),
            [](const auto& a, const auto& b) { return a.Omega < b.Omega; });
  return set;
}

BifurcationBranch branch(std::span<const double> mu_grid, const SystemParams& p) {
  if (!n_threshold(p)) {
    throw std::domain_error("bifurcation branch requires Delta > 0 and J > 0");
  }
  BifurcationBranch out;
  out.mu_grid.assign(mu_grid.begin(), mu_grid.end());
  out.omega_star.resize(mu_grid.size());
  out.normal_form.resize(mu_grid.size());
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  const bool supercritical = D > 0.0 && D < g;
  parallel_for(mu_grid.size(), [&](std::size_t i) {
    const double mu = mu_grid[i];
    out.omega_star[i] = find_steady_rotations(with_pump_ratio(p, mu)).selected_speed();
    out.normal_form[i] = (supercritical && mu >= 1.0) ? omega_star_normal_form(mu, p)
                                                       : std::numeric_limits<double>::quiet_NaN();
  });
  return out;
}

PhaseDiagramGrid phase_diagram(std::span<const double> delta_grid,
                               std::span<const double> mu_grid, const SystemParams& p) {
  if (!(p.optical.J > 0.0)) throw std::domain_error("phase diagram requires J > 0");
  for (double d : delta_grid) {
    if (!(d > 0.0)) throw std::domain_error("phase diagram requires every Delta > 0");
  }
  PhaseDiagramGrid out;
  out.delta_grid.assign(delta_grid.begin(), delta_grid.end());
  out.mu_grid.assign(mu_grid.begin(), mu_grid.end());
  const std::size_t cols = delta_grid.size();
  out.doppler.assign(mu_grid.size() * cols, 0.0);
  out.doppler_max_stable.assign(mu_grid.size() * cols, 0.0);
  out.threshold_line.resize(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    SystemParams q = p;
    q.drive.Delta = delta_grid[j];
    out.threshold_line[j] = *n_threshold(q);
  }
  const double scale = 2.0 * p.optical.m / p.optical.gamma;
  parallel_for(out.doppler.size(), [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    SystemParams q = p;
    q.drive.Delta = delta_grid[j];
    const auto set = find_steady_rotations(with_pump_ratio(q, mu_grid[i]));
    out.doppler[cell] = scale * set.selected_speed();
    out.doppler_max_stable[cell] = scale * set.largest_stable_speed();
  });
  return out;
}

}  // namespace chiral
