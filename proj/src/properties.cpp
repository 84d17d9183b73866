#include "chiral/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include "chiral/dynamics.hpp"
#include "chiral/parallel.hpp"
#include "chiral/readout.hpp"
#include "chiral/steadystate.hpp"
#include "chiral/theory.hpp"

namespace chiral {
namespace {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

struct Outcome {
  double error = 0.0;
  bool ok = true;
};

Outcome within(double error, double tol) { return {error, error <= tol}; }
Outcome holds(bool ok) { return {ok ? 0.0 : 1.0, ok}; }

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

class Suite {
 public:
  explicit Suite(const PropertySuiteOptions& opts) : opts_(opts) {}

  void add(std::string module, std::string name, double tol, std::size_t draws,
           const std::function<Outcome(Rng&)>& fn) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t id = results_.size();
    std::vector<Outcome> out(draws);
    parallel_for(draws, [&](std::size_t i) {
      std::seed_seq seq{opts_.seed, id, std::uint64_t(i)};
      Rng rng(seq);
      try {
        out[i] = fn(rng);
      } catch (const std::exception&) {
        out[i] = {std::numeric_limits<double>::infinity(), false};
      }
    });
    PropertyResult r;
    r.module = std::move(module);
    r.name = std::move(name);
    r.draws = draws;
    r.tolerance = tol;
    for (const auto& o : out) {
      // NaN errors count as failures and poison max_error on purpose.
      if (!o.ok || std::isnan(o.error)) ++r.failures;
      if (std::isnan(o.error) || o.error > r.max_error) r.max_error = o.error;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results_.push_back(std::move(r));
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

 private:
  PropertySuiteOptions opts_;
  std::vector<PropertyResult> results_;
};

// Redraws until `accept` holds.
template <class Pred>
SystemParams draw_where(Rng& rng, Pred accept) {
  for (;;) {
    auto p = random_params(rng);
    if (accept(p)) return p;
  }
}

double fd_first(const SystemParams& p) {
  const double h = 1e-6 * p.optical.gamma / (2.0 * p.optical.m);
  return (tau_rec(h, p) - tau_rec(-h, p)) / (2.0 * h);
}

double fd_third(const SystemParams& p) {
  const double h = 1e-3 * p.optical.gamma / (2.0 * p.optical.m);
  return (tau_rec(2 * h, p) - 2 * tau_rec(h, p) + 2 * tau_rec(-h, p) - tau_rec(-2 * h, p)) /
         (2.0 * h * h * h);
}

cplx normal_cplx(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

double total_angular_momentum(const FieldState& s, const SystemParams& p) {
  return p.mech.I * s.Omega + p.optical.m * (std::norm(s.alpha_plus) - std::norm(s.alpha_minus));
}

// Box used by the oracle-based checks: away from Delta = 0 so tau_rec is not
// small, J small enough for the closed form to be accurate.
SystemParams oracle_params(Rng& rng) {
  SystemParams p;
  p.optical.m = std::uniform_int_distribution<int>(1, 20)(rng);
  p.optical.gamma = uniform(rng, 0.5, 2.0);
  p.optical.kappa_ex = p.optical.gamma;
  p.optical.J = p.optical.gamma * uniform(rng, 0.01, 0.02);
  p.drive.Delta = p.optical.gamma * uniform(rng, 0.2, 1.5) * (uniform(rng, 0, 1) < 0.5 ? -1 : 1);
  return with_photon_number(p, 1.0);
}

double oracle_speed(Rng& rng, const SystemParams& p) {
  return uniform(rng, 0.2, 3.0) * p.optical.gamma / (2.0 * p.optical.m);
}

ProbeConfig probe_for(const SystemParams& p, double Omega_star, bool weak) {
  ProbeConfig cfg;
  cfg.detuning_grid = ProbeConfig::default_grid(p.optical.gamma);
  cfg.Omega_star = Omega_star;
  cfg.use_weak_approx = weak;
  return cfg;
}

double random_speed(Rng& rng, const SystemParams& p) {
  return uniform(rng, -2.0, 2.0) * p.optical.gamma / (2.0 * p.optical.m);
}

void model_core(Suite& s, std::size_t n) {
  s.add("model-core", "tau_rec odd in Omega", 0.0, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const double w = random_speed(rng, p);
    return within(std::abs(tau_rec(-w, p) + tau_rec(w, p)), 0.0);
  });
  s.add("model-core", "tau_rec odd in Delta", 0.0, n, [](Rng& rng) {
    const auto p = random_params(rng);
    auto q = p;
    q.drive.Delta = -p.drive.Delta;
    const double w = random_speed(rng, p);
    return within(std::abs(tau_rec(w, q) + tau_rec(w, p)), 0.0);
  });
  s.add("model-core", "finite-difference slope matches gamma_opt", 1e-6, n, [](Rng& rng) {
    const auto p = draw_where(
        rng, [](const SystemParams& q) { return std::abs(q.drive.Delta) >= 1e-3 * q.optical.gamma; });
    return within(rel(fd_first(p), gamma_opt(p)), 1e-6);
  });
  s.add("model-core", "third finite difference matches cubic_coeff", 1e-4, n, [](Rng& rng) {
    // u_opt vanishes at Delta = 0 and |Delta| = gamma; stay 5% away from both.
    const auto p = draw_where(rng, [](const SystemParams& q) {
      const double d = std::abs(q.drive.Delta) / q.optical.gamma;
      return d >= 0.05 && std::abs(d - 1.0) >= 0.05;
    });
    return within(rel(-fd_third(p) / 6.0, cubic_coeff(p)), 1e-4);
  });
  s.add("model-core", "gamma_opt at n_th equals Gamma_phi", 1e-12, n, [](Rng& rng) {
    const auto p = draw_where(rng, [](const SystemParams& q) { return q.drive.Delta > 0.0; });
    const auto at = with_photon_number(p, *n_threshold(p));
    return within(rel(gamma_opt(at), p.mech.Gamma_phi), 1e-12);
  });
  s.add("model-core", "no threshold for Delta <= 0", 0.0, n, [](Rng& rng) {
    auto p = random_params(rng);
    p.drive.Delta = -std::abs(p.drive.Delta);
    return holds(!n_threshold(p).has_value());
  });
  s.add("model-core", "m^2 scaling of gamma_opt and n_th", 1e-12, n, [](Rng& rng) {
    auto p = draw_where(rng, [](const SystemParams& q) { return q.drive.Delta > 0.0; });
    p.optical.m = 1;
    const double n1 = *n_threshold(p);
    const double g1 = gamma_opt(p);
    double worst = 0.0;
    for (int m : {2, 5, 10, 50}) {
      p.optical.m = m;
      worst = std::max(worst, rel(*n_threshold(p) * m * m, n1));
      worst = std::max(worst, rel(gamma_opt(p) / (m * m), g1));
    }
    return within(worst, 1e-12);
  });
  s.add("model-core", "torque is -d/dphi of the interaction energy", 1e-6, n, [](Rng& rng) {
    const auto p = random_params(rng);
    FieldState f{normal_cplx(rng), normal_cplx(rng), uniform(rng, -3.0, 3.0), 0.0};
    const double h = 1e-6 / (2.0 * p.optical.m);
    FieldState up = f, down = f;
    up.phi += h;
    down.phi -= h;
    const double fd = -(interaction_energy(up, p) - interaction_energy(down, p)) / (2 * h);
    const double tau = instantaneous_torque(f, p);
    // Relative error, floored at 1e-3 of the torque amplitude near its zeros.
    const double amp = 4.0 * p.optical.m * p.optical.J * std::abs(f.alpha_plus) *
                       std::abs(f.alpha_minus);
    return within(std::abs(fd - tau) / std::max(std::abs(tau), 1e-3 * amp), 1e-6);
  });
  s.add("model-core", "|tau_rec| <= A_m / gamma^2", 1e-15, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const double w = random_speed(rng, p) * uniform(rng, 0.0, 5.0);
    const double bound = recoil_amplitude(p) / (p.optical.gamma * p.optical.gamma);
    if (bound == 0.0) return holds(tau_rec(w, p) == 0.0);
    return within(std::max(0.0, std::abs(tau_rec(w, p)) / bound - 1.0), 1e-15);
  });
}

void dynamics(Suite& s, const PropertySuiteOptions& o) {
  s.add("dynamics", "optical response additive in the pumps", 1e-12, o.draws, [](Rng& rng) {
    const auto p = random_params(rng);
    FieldState f{normal_cplx(rng), normal_cplx(rng), uniform(rng, -10.0, 10.0), 0.0};
    const PumpAmplitudes a{normal_cplx(rng), 0.0};
    const PumpAmplitudes b{0.0, normal_cplx(rng)};
    const auto d_ab = rhs_driven(f, {a.plus, b.minus}, p);
    const auto d_a = rhs_driven(f, a, p);
    const auto d_b = rhs_driven(f, b, p);
    const auto d_0 = rhs_driven(f, {}, p);
    const double scale = 1.0 + std::abs(d_ab.d_alpha_plus) + std::abs(d_ab.d_alpha_minus);
    const double e = std::abs(d_ab.d_alpha_plus - (d_a.d_alpha_plus + d_b.d_alpha_plus - d_0.d_alpha_plus)) +
                     std::abs(d_ab.d_alpha_minus - (d_a.d_alpha_minus + d_b.d_alpha_minus - d_0.d_alpha_minus));
    return within(e / scale, 1e-12);
  });
  s.add("dynamics", "phase-averaged and single-pump oracle torques agree", 1e-6,
        o.trajectory_draws, [](Rng& rng) {
          auto p = oracle_params(rng);
          const double w = oracle_speed(rng, p);
          IntegratorConfig cfg;
          p.drive.pump_mode = PhaseAveraged{};
          const double a = time_averaged_torque_oracle(w, p, cfg).tau_avg;
          p.drive.pump_mode = SinglePumpSuperposition{};
          const double b = time_averaged_torque_oracle(w, p, cfg).tau_avg;
          return within(rel(a, b), 1e-6);
        });
  s.add("dynamics", "oracle error shrinks ~4x when J is halved (|ratio - 4| <= 1)", 1.0,
        o.trajectory_draws, [](Rng& rng) {
          auto p = oracle_params(rng);
          p.drive.pump_mode = SinglePumpSuperposition{};
          const double w = oracle_speed(rng, p);
          IntegratorConfig cfg;
          const double coarse = time_averaged_torque_oracle(w, p, cfg).rel_err;
          p.optical.J *= 0.5;
          const double fine = time_averaged_torque_oracle(w, p, cfg).rel_err;
          return within(std::abs(coarse / fine - 4.0), 1.0);
        });
  s.add("dynamics", "conservative limit conserves I Omega + m (n+ - n-)", 1e-8, o.trajectory_draws,
        [](Rng& rng) {
          SystemParams p;
          p.optical.m = std::uniform_int_distribution<int>(1, 20)(rng);
          p.optical.gamma = 0.0;
          p.optical.J = uniform(rng, 0.01, 0.2);
          p.drive.Delta = uniform(rng, 0.5, 2.0) * (uniform(rng, 0, 1) < 0.5 ? -1 : 1);
          p.drive.S_mag = 0.0;
          p.drive.pump_mode = FixedPhase{0.0};
          p.mech.I = std::pow(10.0, uniform(rng, 2.0, 4.0));
          p.mech.Gamma_phi = 0.0;
          FieldState s0{normal_cplx(rng), normal_cplx(rng), uniform(rng, -1.0, 1.0),
                        uniform(rng, -0.01, 0.01)};
          IntegratorConfig cfg;
          cfg.rel_tol = 1e-12;
          cfg.abs_tol = 1e-14;
          const double period = 2.0 * std::numbers::pi / std::abs(p.drive.Delta);
          cfg.sample_dt = period;
          const auto tr = integrate_full(s0, 100.0 * period, p, cfg);
          const double L0 = total_angular_momentum(s0, p);
          // Relative to the largest term in the sum, so a near-zero total is not penalized.
          const double scale = std::max({std::abs(L0), p.mech.I * std::abs(s0.Omega),
                                         p.optical.m * std::norm(s0.alpha_plus),
                                         p.optical.m * std::norm(s0.alpha_minus)});
          double worst = 0.0;
          for (const auto& st : tr.states) {
            worst = std::max(worst, std::abs(total_angular_momentum(st, p) - L0) / scale);
          }
          return within(worst, 1e-8);
        });
  s.add("dynamics", "Z2 relabeling maps trajectories to trajectories", 1e-7, o.trajectory_draws,
        [](Rng& rng) {
          auto p = random_params(rng);
          p.optical.m = std::min(p.optical.m, 20);
          p.mech.I = std::pow(10.0, uniform(rng, 1.0, 3.0));
          const double chi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
          p.drive.pump_mode = FixedPhase{chi};
          auto pm = p;
          pm.drive.pump_mode = FixedPhase{-chi};
          const cplx rot = std::polar(1.0, -chi);
          const FieldState s0{0.3 * normal_cplx(rng), 0.3 * normal_cplx(rng),
                              uniform(rng, -1.0, 1.0), uniform(rng, -0.01, 0.01)};
          const FieldState m0{s0.alpha_minus * rot, s0.alpha_plus * rot, -s0.phi, -s0.Omega};
          IntegratorConfig cfg;
          cfg.sample_dt = 0.5;
          cfg.rel_tol = 1e-11;
          cfg.abs_tol = 1e-13;
          const double t_end = 20.0 / p.optical.gamma;
          const auto a = integrate_full(s0, t_end, p, cfg);
          const auto b = integrate_full(m0, t_end, pm, cfg);
          if (a.size() != b.size()) return holds(false);
          double worst = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) {
            const auto& x = a.states[i];
            const auto& y = b.states[i];
            const double scale = 1.0 + std::abs(x.alpha_plus) + std::abs(x.alpha_minus) + std::abs(x.phi);
            const double e = std::abs(y.alpha_plus - x.alpha_minus * rot) +
                             std::abs(y.alpha_minus - x.alpha_plus * rot) +
                             std::abs(y.phi + x.phi) + std::abs(y.Omega + x.Omega);
            worst = std::max(worst, e / scale);
          }
          return within(worst, 1e-7);
        });
  s.add("dynamics", "full model saturates within 5% of the reduced fixed point", 0.05,
        o.full_model_draws, [](Rng& rng) {
          SystemParams p;
          p.optical.m = std::uniform_int_distribution<int>(8, 12)(rng);
          p.optical.J = uniform(rng, 0.04, 0.06);
          p.drive.Delta = uniform(rng, 0.4, 0.8);
          p.mech.I = 1e4;
          p.mech.Gamma_phi = 1.0;
          p.drive.pump_mode = FrequencyOffset{default_pump_offset(p)};
          p = with_pump_ratio(p, uniform(rng, 1.4, 1.7));
          const double target = find_steady_rotations(p).selected_speed();
          const double sign = uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0;
          // Seed above the velocity bias of order delta_pump / (4m) from the
          // frequency-offset pump so the sign is set by the seed.
          FieldState s0;
          s0.Omega = sign * 1e-2 * p.optical.gamma / (2.0 * p.optical.m);
          IntegratorConfig cfg;
          cfg.sample_dt = 10.0;
          const double rate = (gamma_opt(p) - p.mech.Gamma_phi) / p.mech.I;
          // Growth from the seed plus about eight e-folds of settling.
          const double t_end = (std::log(target / std::abs(s0.Omega)) + 8.0) / rate;
          const auto tr = integrate_full(s0, t_end, p, cfg);
          double sum = 0.0;
          std::size_t count = 0;
          for (std::size_t i = 0; i < tr.size(); ++i) {
            if (tr.times[i] >= 0.75 * t_end) {
              sum += tr.states[i].Omega;
              ++count;
            }
          }
          const double tail = sum / double(count);
          return within(rel(sign * tail, target), 0.05);
        });
}

void steadystate(Suite& s, std::size_t n) {
  // Random draw pushed to a pump ratio in [0, 3) when a threshold exists.
  auto draw = [](Rng& rng) {
    auto p = random_params(rng);
    p.optical.J = std::max(p.optical.J, 0.01 * p.optical.gamma);
    if (const auto nth = n_threshold(p)) p = with_photon_number(p, *nth * uniform(rng, 0.0, 3.0));
    return p;
  };
  s.add("steadystate", "roots come in +-Omega pairs with equal stability", 0.0, n, [draw](Rng& rng) {
    const auto set = find_steady_rotations(draw(rng));
    for (const auto& r : set.roots) {
      const auto it = std::find_if(set.roots.begin(), set.roots.end(),
                                   [&](const auto& o) { return o.Omega == -r.Omega; });
      if (it == set.roots.end() || it->stable != r.stable) return holds(false);
    }
    return holds(true);
  });
  s.add("steadystate", "Delta -> -Delta: the damping side keeps only a stable rest state", 0.0, n,
        [draw](Rng& rng) {
          auto p = draw(rng);
          p.drive.Delta = -std::abs(p.drive.Delta);
          const auto set = find_steady_rotations(p);
          return holds(set.roots.size() == 1 && set.roots[0].stable);
        });
  s.add("steadystate", "pitchfork: 1 stable root at mu = 1 - 1e-4, 2 at 1 + 1e-4", 0.0, n,
        [](Rng& rng) {
          auto p = random_params(rng);
          p.optical.J = std::max(p.optical.J, 0.01 * p.optical.gamma);
          p.drive.Delta = p.optical.gamma * uniform(rng, 0.02, 0.98);
          const auto below = find_steady_rotations(with_pump_ratio(p, 1.0 - 1e-4));
          const auto above = find_steady_rotations(with_pump_ratio(p, 1.0 + 1e-4));
          return holds(below.stable_count() == 1 && below.rest().stable &&
                       above.stable_count() == 2 && !above.rest().stable);
        });
  s.add("steadystate", "near-threshold root within 1% of the square-root law", 0.01, n,
        [](Rng& rng) {
          auto p = random_params(rng);
          p.optical.J = std::max(p.optical.J, 0.01 * p.optical.gamma);
          p.drive.Delta = optimal_detuning(p);
          const double mu = 1.0 + std::pow(10.0, uniform(rng, -4.0, -2.0));
          const double exact = find_steady_rotations(with_pump_ratio(p, mu)).selected_speed();
          return within(std::abs(exact / omega_star_normal_form(mu, p) - 1.0), 0.01);
        });
  s.add("steadystate", "reduced decay rate matches (Gamma_phi - Gamma_opt) / I", 0.01, n,
        [](Rng& rng) {
          auto p = draw_where(rng, [](const SystemParams& q) { return q.drive.Delta > 0.0; });
          p = with_pump_ratio(p, uniform(rng, 0.0, 0.9));
          const double expected = (p.mech.Gamma_phi - gamma_opt(p)) / p.mech.I;
          const double t_end = 5.0 / expected;
          IntegratorConfig cfg;
          cfg.max_step = 0.05 / expected;
          cfg.sample_dt = t_end;
          const double seed = 1e-4 * p.optical.gamma / (2.0 * p.optical.m);
          const auto tr = integrate_reduced(seed, t_end, p, cfg);
          const double observed = std::log(seed / tr.final_state().Omega) / t_end;
          return within(rel(observed, expected), 0.01);
        });
}

void readout(Suite& s, std::size_t n) {
  s.add("readout", "R+(Dp) = R-(-Dp), exact and weak forms", 1e-12, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const double w = random_speed(rng, p);
    double worst = 0.0;
    for (bool weak : {false, true}) {
      const auto sp = spectra(probe_for(p, w, weak), p);
      const std::size_t m = sp.detunings.size();
      for (std::size_t i = 0; i < m; ++i) {
        if (sp.R_plus[i] == 0.0 && sp.R_minus[m - 1 - i] == 0.0) continue;
        worst = std::max(worst, rel(sp.R_minus[m - 1 - i], sp.R_plus[i]));
      }
    }
    return within(worst, 1e-12);
  });
  s.add("readout", "A_R odd in the probe detuning", 1e-12, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const auto sp = spectra(probe_for(p, random_speed(rng, p), uniform(rng, 0, 1) < 0.5), p);
    const std::size_t m = sp.detunings.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      worst = std::max(worst, std::abs(sp.A_R[i] + sp.A_R[m - 1 - i]));
      if (std::abs(sp.A_R[i]) > 1.0) return holds(false);
    }
    return within(worst, 1e-12);
  });
  s.add("readout", "Omega* = 0 gives A_R = 0 and T+ = T-", 0.0, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const auto sp = spectra(probe_for(p, 0.0, uniform(rng, 0, 1) < 0.5), p);
    double worst = 0.0;
    for (std::size_t i = 0; i < sp.detunings.size(); ++i) {
      worst = std::max({worst, std::abs(sp.A_R[i]), std::abs(sp.T_plus[i] - sp.T_minus[i])});
    }
    return within(worst, 0.0);
  });
  s.add("readout", "Omega* != 0 and J > 0 make T+ and T- differ", 0.0, n, [](Rng& rng) {
    const auto p = random_params(rng);
    double w = random_speed(rng, p);
    if (w == 0.0) w = p.optical.gamma / (2.0 * p.optical.m);
    const auto sp = spectra(probe_for(p, w, false), p);
    double diff = 0.0;
    for (std::size_t i = 0; i < sp.detunings.size(); ++i) {
      diff = std::max(diff, std::abs(sp.T_plus[i] - sp.T_minus[i]));
    }
    return holds(diff > 0.0);
  });
  s.add("readout", "channel centers split by 4 m Omega*", 0.0, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const double w = random_speed(rng, p);
    const double split =
        channel_center(Direction::Plus, w, p) - channel_center(Direction::Minus, w, p);
    return within(std::abs(split - 4.0 * p.optical.m * w), 0.0);
  });
  s.add("readout", "passivity: T <= 1, weak R <= (kappa_ex J / gamma^2)^2", 1e-12, n, [](Rng& rng) {
    const auto p = random_params(rng);
    const double w = random_speed(rng, p);
    const double g2 = p.optical.gamma * p.optical.gamma;
    const double bound = std::pow(p.optical.kappa_ex * p.optical.J / g2, 2);
    const auto exact = spectra(probe_for(p, w, false), p);
    const auto weak = spectra(probe_for(p, w, true), p);
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.detunings.size(); ++i) {
      worst = std::max({worst, exact.T_plus[i] - 1.0, exact.T_minus[i] - 1.0});
      if (bound > 0.0) {
        worst = std::max({worst, weak.R_plus[i] / bound - 1.0, weak.R_minus[i] / bound - 1.0});
      }
      if (exact.R_plus[i] < 0.0 || exact.T_plus[i] < 0.0) return holds(false);
    }
    return within(std::max(worst, 0.0), 1e-12);
  });
}

}  // namespace

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> mode(1, 50);
  SystemParams p;
  p.optical.m = mode(rng);
  p.optical.gamma = 0.5 + 1.5 * unit(rng);
  p.optical.J = p.optical.gamma * (0.001 + 0.2 * unit(rng));
  p.optical.kappa_ex = p.optical.gamma * (0.05 + 1.95 * unit(rng));
  p.drive.Delta = p.optical.gamma * (-3.0 + 6.0 * unit(rng));
  p.drive.S_mag = 2.0 * unit(rng);
  p.mech.I = std::pow(10.0, 1.0 + 4.0 * unit(rng));
  p.mech.Gamma_phi = std::pow(10.0, -1.0 + 2.0 * unit(rng));
  return p;
}

std::vector<PropertyResult> run_property_suite(const PropertySuiteOptions& opts) {
  Suite s(opts);
  model_core(s, opts.draws);
  dynamics(s, opts);
  steadystate(s, opts.draws);
  readout(s, opts.draws);
  return s.take();
}

}  // namespace chiral
