#include "chiral/dynamics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "chiral/parallel.hpp"

namespace chiral {
namespace {

namespace ode = boost::numeric::odeint;

using cplx = std::complex<double>;
using FullVec = std::array<double, 6>;
using ReducedVec = std::array<double, 2>;
using OpticalVec = std::array<double, 5>;  // Re/Im alpha+, Re/Im alpha-, running torque integral

constexpr cplx kI{0.0, 1.0};

FieldState unpack(const FullVec& x) {
  return FieldState{{x[0], x[1]}, {x[2], x[3]}, x[4], x[5]};
}

FullVec pack(const FieldState& s) {
  return {s.alpha_plus.real(), s.alpha_plus.imag(), s.alpha_minus.real(),
          s.alpha_minus.imag(), s.phi, s.Omega};
}

template <std::size_t N>
bool all_finite(const std::array<double, N>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// Dense-output Dormand-Prince loop. `emit(t, x)` is called at t = 0, at every
// sample time (or accepted step when sample_dt == 0) and exactly at t_end.
template <std::size_t N, class System, class Emit, class ToState>
void integrate_dense(System sys, std::array<double, N> x0, double t_end,
                     const IntegratorConfig& cfg, Emit emit, ToState to_state) {
  auto stepper = ode::make_dense_output(cfg.abs_tol, cfg.rel_tol, cfg.max_step,
                                        ode::runge_kutta_dopri5<std::array<double, N>>());
  stepper.initialize(x0, 0.0, std::min(cfg.max_step, t_end) * 1e-3);
  emit(0.0, x0);

  double last_t = 0.0;
  std::array<double, N> last_x = x0;
  std::array<double, N> x{};
  std::size_t k = 1;
  const double t_stop = t_end * (1.0 - 1e-13);

  while (stepper.current_time() < t_end) {
    try {
      stepper.do_step(sys);
    } catch (const std::exception& e) {
      throw IntegrationError(std::string("integration failed: ") + e.what(), last_t,
                             to_state(last_x));
    }
    const double t = stepper.current_time();
    if (!all_finite(stepper.current_state())) {
      throw IntegrationError("integration failed: non-finite state near t = " + std::to_string(t),
                             last_t, to_state(last_x));
    }
    if (stepper.current_time_step() < 1e-13 * std::max(1.0, std::abs(t))) {
      throw IntegrationError("integration failed: step size underflow at t = " + std::to_string(t),
                             last_t, to_state(last_x));
    }
    if (cfg.sample_dt > 0.0) {
      for (double ts = k * cfg.sample_dt; ts <= t && ts < t_stop; ts = (++k) * cfg.sample_dt) {
        stepper.calc_state(ts, x);
        emit(ts, x);
      }
    } else if (t < t_stop) {
      emit(t, stepper.current_state());
    }
    last_t = std::min(t, t_end);
    last_x = stepper.current_state();
  }
  stepper.calc_state(t_end, x);
  emit(t_end, x);
}

void check_mode_for_dynamics(const SystemParams& p) {
  if (std::holds_alternative<PhaseAveraged>(p.drive.pump_mode) ||
      std::holds_alternative<SinglePumpSuperposition>(p.drive.pump_mode)) {
    throw std::invalid_argument(pump_mode_name(p.drive.pump_mode) +
                                " is an averaging prescription for frozen mechanics; "
                                "use FrequencyOffset or FixedPhase for full dynamics");
  }
}

// One deterministic pump realization for the oracle.
struct Realization {
  SystemParams params;
  ActivePumps active = ActivePumps::Both;
};

double averaging_window(double Omega, const SystemParams& p) {
  const double g = p.optical.gamma;
  double window = 100.0 / g;
  const double doppler = std::abs(2.0 * p.optical.m * Omega);
  if (doppler > 0.0) {
    const double period = 2.0 * std::numbers::pi / doppler;
    window = std::ceil(std::max(20.0 * period, window) / period) * period;
  }
  if (const auto* fo = std::get_if<FrequencyOffset>(&p.drive.pump_mode)) {
    const double beat = std::abs(2.0 * p.optical.m * Omega + fo->delta_pump);
    if (beat > 0.0) {
      const double period = 2.0 * std::numbers::pi / beat;
      window = std::ceil(window / period) * period;
    }
  }
  return window;
}

double average_torque(double Omega, const Realization& r, const IntegratorConfig& cfg,
                      double t_settle, double window) {
  const SystemParams& p = r.params;
  const double g = p.optical.gamma;
  const double D = p.drive.Delta;
  const double m = p.optical.m;
  const double J = p.optical.J;

  double offset = 0.0;
  if (const auto* fo = std::get_if<FrequencyOffset>(&p.drive.pump_mode)) offset = fo->delta_pump;
  const auto s0 = pump_amplitudes(0.0, p, r.active);
  const cplx a_plus = s0.plus / cplx(g, -D);
  const cplx a_minus = s0.minus / cplx(g, -(D + offset));

  auto sys = [&](const OpticalVec& x, OpticalVec& dx, double t) {
    FieldState s{{x[0], x[1]}, {x[2], x[3]}, Omega * t, Omega};
    const auto pumps = pump_amplitudes(t, p, r.active);
    const cplx phase = std::polar(1.0, 2.0 * m * s.phi);
    const cplx loss{-g, D};
    const cplx da_plus = loss * s.alpha_plus - kI * J * std::conj(phase) * s.alpha_minus + pumps.plus;
    const cplx da_minus = loss * s.alpha_minus - kI * J * phase * s.alpha_plus + pumps.minus;
    dx[0] = da_plus.real();
    dx[1] = da_plus.imag();
    dx[2] = da_minus.real();
    dx[3] = da_minus.imag();
    dx[4] = 4.0 * m * J * (phase * std::conj(s.alpha_minus) * s.alpha_plus).imag();
  };

  OpticalVec x{a_plus.real(), a_plus.imag(), a_minus.real(), a_minus.imag(), 0.0};
  auto stepper = ode::make_controlled(cfg.abs_tol, cfg.rel_tol, cfg.max_step,
                                      ode::runge_kutta_dopri5<OpticalVec>());
  const double dt0 = std::min(cfg.max_step, 1e-3 / g);
  ode::integrate_adaptive(stepper, sys, x, 0.0, t_settle, dt0);
  const double q_start = x[4];
  ode::integrate_adaptive(stepper, sys, x, t_settle, t_settle + window, dt0);
  if (!all_finite(x)) throw std::runtime_error("torque oracle: non-finite optical state");
  return (x[4] - q_start) / window;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be > 0");
  }
  if (!(max_step > 0.0)) throw std::invalid_argument("integrator max_step must be > 0");
  if (!(sample_dt >= 0.0)) throw std::invalid_argument("integrator sample_dt must be >= 0");
  if (!(time_budget > 0.0)) throw std::invalid_argument("integrator time_budget must be > 0");
}

PumpAmplitudes pump_amplitudes(double t, const SystemParams& p, ActivePumps active) {
  const double S = p.drive.S_mag;
  struct Visitor {
    double S;
    double t;
    cplx operator()(const PhaseAveraged&) const { return S; }
    cplx operator()(const SinglePumpSuperposition&) const { return S; }
    cplx operator()(const FrequencyOffset& fo) const { return std::polar(S, -fo.delta_pump * t); }
    cplx operator()(const FixedPhase& fp) const { return std::polar(S, fp.chi); }
  };
  PumpAmplitudes out{cplx(S, 0.0), std::visit(Visitor{S, t}, p.drive.pump_mode)};
  if (active == ActivePumps::PlusOnly) out.minus = 0.0;
  if (active == ActivePumps::MinusOnly) out.plus = 0.0;
  return out;
}

FieldDerivative rhs_driven(const FieldState& s, PumpAmplitudes pumps, const SystemParams& p) {
  const double m = p.optical.m;
  const double J = p.optical.J;
  const cplx phase = std::polar(1.0, 2.0 * m * s.phi);
  const cplx loss{-p.optical.gamma, p.drive.Delta};
  FieldDerivative d;
  d.d_alpha_plus = loss * s.alpha_plus - kI * J * std::conj(phase) * s.alpha_minus + pumps.plus;
  d.d_alpha_minus = loss * s.alpha_minus - kI * J * phase * s.alpha_plus + pumps.minus;
  d.d_phi = s.Omega;
  const double torque = 4.0 * m * J * (phase * std::conj(s.alpha_minus) * s.alpha_plus).imag();
  d.d_Omega = (-p.mech.Gamma_phi * s.Omega + torque) / p.mech.I;
  return d;
}

FieldDerivative rhs_full(const FieldState& s, double t, const SystemParams& p, ActivePumps active) {
  return rhs_driven(s, pump_amplitudes(t, p, active), p);
}

Trajectory integrate_full(const FieldState& s0, double t_end, const SystemParams& p,
                          const IntegratorConfig& cfg) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  cfg.validate();
  check_mode_for_dynamics(p);

  auto sys = [&p](const FullVec& x, FullVec& dx, double t) {
    const auto d = rhs_full(unpack(x), t, p);
    dx = {d.d_alpha_plus.real(), d.d_alpha_plus.imag(), d.d_alpha_minus.real(),
          d.d_alpha_minus.imag(), d.d_phi, d.d_Omega};
  };
  Trajectory traj;
  auto emit = [&](double t, const FullVec& x) {
    const auto s = unpack(x);
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.observables.push_back(observe(s, p));
  };
  integrate_dense(sys, pack(s0), t_end, cfg, emit, unpack);
  return traj;
}

Trajectory integrate_reduced(double Omega0, double t_end, const SystemParams& p,
                             const IntegratorConfig& cfg) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  cfg.validate();

  const double I = p.mech.I;
  const double damping = p.mech.Gamma_phi;
  auto sys = [&](const ReducedVec& x, ReducedVec& dx, double) {
    dx[0] = x[1];
    dx[1] = (tau_rec(x[1], p) - damping * x[1]) / I;
  };
  const double n0 = photon_number_n0(p);
  auto to_state = [](const ReducedVec& x) { return FieldState{{}, {}, x[0], x[1]}; };
  Trajectory traj;
  auto emit = [&](double t, const ReducedVec& x) {
    traj.times.push_back(t);
    traj.states.push_back(to_state(x));
    DerivedObservables o;
    o.n_plus = n0;
    o.n_minus = n0;
    o.N = 2.0 * n0;
    o.tau_inst = tau_rec(x[1], p);
    o.L_phi = I * x[1];
    traj.observables.push_back(o);
  };
  integrate_dense(sys, ReducedVec{0.0, Omega0}, t_end, cfg, emit, to_state);
  return traj;
}

TorqueOracleResult time_averaged_torque_oracle(double Omega, const SystemParams& p,
                                               const IntegratorConfig& cfg) {
  if (!std::isfinite(Omega)) throw std::invalid_argument("Omega must be finite");
  cfg.validate();
  const double g = p.optical.gamma;
  const double t_settle = 10.0 / g;
  const double window = averaging_window(Omega, p);
  if (t_settle + window > cfg.time_budget) {
    throw std::runtime_error("torque oracle: averaging window " + std::to_string(window) +
                             " exceeds the time budget " + std::to_string(cfg.time_budget));
  }

  double tau_avg = 0.0;
  if (std::holds_alternative<SinglePumpSuperposition>(p.drive.pump_mode)) {
    const double plus = average_torque(Omega, {p, ActivePumps::PlusOnly}, cfg, t_settle, window);
    const double minus = average_torque(Omega, {p, ActivePumps::MinusOnly}, cfg, t_settle, window);
    tau_avg = plus + minus;
  } else if (std::holds_alternative<PhaseAveraged>(p.drive.pump_mode)) {
    const double floor = recoil_amplitude(p) * 1e-9 / (g * g);
    // Each refinement doubles the phase grid; only the interleaved odd
    // phases are new.
    double sum = 0.0;
    auto refine = [&](std::size_t n, bool first_pass) {
      const std::size_t count = first_pass ? n : n / 2;
      std::vector<double> fresh(count);
      parallel_for(count, [&](std::size_t k) {
        const std::size_t index = first_pass ? k : 2 * k + 1;
        SystemParams q = p;
        q.drive.pump_mode = FixedPhase{2.0 * std::numbers::pi * double(index) / double(n)};
        fresh[k] = average_torque(Omega, {q, ActivePumps::Both}, cfg, t_settle, window);
      });
      for (double v : fresh) sum += v;
      return sum / double(n);
    };
    std::size_t n = 16;
    double avg = refine(n, true);
    while (n < 1024) {
      n *= 2;
      const double next = refine(n, false);
      const bool converged = std::abs(next - avg) <= 1e-8 * std::max(std::abs(next), floor);
      avg = next;
      if (converged) break;
    }
    tau_avg = avg;
  } else {
    tau_avg = average_torque(Omega, {p, ActivePumps::Both}, cfg, t_settle, window);
  }

  TorqueOracleResult out;
  out.Omega = Omega;
  out.tau_avg = tau_avg;
  out.tau_analytic = tau_rec(Omega, p);
  const double floor = recoil_amplitude(p) * 1e-9 / (g * g);
  out.rel_err = std::abs(out.tau_avg - out.tau_analytic) / std::max(std::abs(out.tau_analytic), floor);
  return out;
}

}  // namespace chiral
