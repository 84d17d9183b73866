#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "chiral/theory.hpp"
#include "test_support.hpp"

using namespace chiral;
using chiral::testing::figure_params;
using chiral::testing::rel_diff;

namespace {

// Independent finite-difference derivatives of tau_rec at Omega = 0.
double fd_first(const SystemParams& p) {
  const double h = 1e-6 * p.optical.gamma / (2.0 * p.optical.m);
  return (tau_rec(h, p) - tau_rec(-h, p)) / (2.0 * h);
}

double fd_third(const SystemParams& p) {
  const double h = 1e-3 * p.optical.gamma / (2.0 * p.optical.m);
  return (tau_rec(2 * h, p) - 2 * tau_rec(h, p) + 2 * tau_rec(-h, p) - tau_rec(-2 * h, p)) /
         (2.0 * h * h * h);
}

SystemParams unit_photon_params() { return with_photon_number(figure_params(), 1.0); }

}  // namespace

TEST_CASE("photon_number_n0") {
  auto p = figure_params();
  p.drive.S_mag = 0.0;
  CHECK(photon_number_n0(p) == 0.0);

  p.drive.Delta = 0.0;
  p.drive.S_mag = 1.0;
  CHECK(photon_number_n0(p) == doctest::Approx(1.0));

  p.drive.Delta = 1.0 / std::sqrt(3.0);
  CHECK(photon_number_n0(p) == doctest::Approx(0.75).epsilon(1e-14));

  SUBCASE("round trip through the drive amplitude") {
    CHECK(photon_number_n0(with_photon_number(p, 0.3)) == doctest::Approx(0.3).epsilon(1e-14));
  }
}

TEST_CASE("instantaneous_torque") {
  auto p = figure_params();
  FieldState s;
  s.alpha_minus = 1.0;
  CHECK(instantaneous_torque(s, p) == 0.0);

  s.alpha_plus = 1.0;
  s.alpha_minus = 1.0;
  CHECK(instantaneous_torque(s, p) == 0.0);

  s.alpha_minus = {0.0, -1.0};
  CHECK(instantaneous_torque(s, p) == doctest::Approx(4.0).epsilon(1e-14));

  SUBCASE("equals minus the angle derivative of the interaction energy") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      FieldState f{{n(rng), n(rng)}, {n(rng), n(rng)}, n(rng), 0.0};
      const double h = 1e-6 / (2.0 * p.optical.m);
      FieldState up = f, down = f;
      up.phi += h;
      down.phi -= h;
      const double fd = -(interaction_energy(up, p) - interaction_energy(down, p)) / (2 * h);
      const double tau = instantaneous_torque(f, p);
      CHECK(std::abs(fd - tau) <= 1e-6 * std::max(std::abs(tau), 1e-3));
    }
  }
}

TEST_CASE("tau_rec") {
  auto p = unit_photon_params();
  CHECK(tau_rec(0.0, p) == 0.0);
  CHECK(tau_rec(0.02, p) == doctest::Approx(0.18322117146356248).epsilon(1e-12));

  auto resonant = p;
  resonant.drive.Delta = 0.0;
  for (double w : {-0.3, 0.001, 0.02, 1.0}) CHECK(tau_rec(w, resonant) == 0.0);

  SUBCASE("odd in Omega and in Delta, bounded by A_m / gamma^2") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
      auto q = chiral::testing::random_params(rng);
      const double w = u(rng) * 3.0 * q.optical.gamma / q.optical.m;
      CHECK(tau_rec(-w, q) == -tau_rec(w, q));
      auto flipped = q;
      flipped.drive.Delta = -q.drive.Delta;
      CHECK(tau_rec(w, flipped) == -tau_rec(w, q));
      CHECK(std::abs(tau_rec(w, q)) <=
            recoil_amplitude(q) / (q.optical.gamma * q.optical.gamma) * (1 + 1e-15));
    }
  }
}

TEST_CASE("gamma_opt") {
  auto p = unit_photon_params();
  CHECK(gamma_opt(p) == doctest::Approx(6.0 * std::sqrt(3.0)).epsilon(1e-13));
  CHECK(rel_diff(gamma_opt(p), fd_first(p)) < 1e-6);

  auto resonant = p;
  resonant.drive.Delta = 0.0;
  CHECK(gamma_opt(resonant) == 0.0);

  auto doubled = p;
  doubled.optical.m = 20;
  CHECK(gamma_opt(doubled) == doctest::Approx(4.0 * gamma_opt(p)).epsilon(1e-14));

  SUBCASE("matches the finite-difference slope for random parameters") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
      auto q = chiral::testing::random_params(rng);
      if (std::abs(q.drive.Delta) < 1e-3 * q.optical.gamma) continue;
      CHECK(rel_diff(fd_first(q), gamma_opt(q)) < 1e-6);
    }
  }
}

TEST_CASE("n_threshold") {
  auto p = figure_params();
  auto neg = p;
  neg.drive.Delta = -0.5;
  CHECK_FALSE(n_threshold(neg).has_value());
  auto no_scatter = p;
  no_scatter.optical.J = 0.0;
  CHECK_FALSE(n_threshold(no_scatter).has_value());

  REQUIRE(n_threshold(p).has_value());
  CHECK(*n_threshold(p) == doctest::Approx(0.096225044864937627).epsilon(1e-13));

  SUBCASE("gamma_opt at threshold equals Gamma_phi") {
    const auto at = with_photon_number(p, *n_threshold(p));
    CHECK(rel_diff(gamma_opt(at), p.mech.Gamma_phi) < 1e-12);
  }

  SUBCASE("m^-2 scaling") {
    const double ref = *n_threshold(p) * 100.0;
    for (int m : {1, 2, 5, 10, 50}) {
      auto q = p;
      q.optical.m = m;
      CHECK(rel_diff(*n_threshold(q) * m * m, ref) < 1e-12);
      auto q1 = with_photon_number(q, 1.0);
      CHECK(rel_diff(gamma_opt(q1) / (m * m), gamma_opt(with_photon_number(p, 1.0)) / 100.0) <
            1e-12);
    }
  }
}

TEST_CASE("cubic_coeff") {
  auto p = unit_photon_params();
  CHECK(cubic_coeff(p) == doctest::Approx(3117.6914536239791).epsilon(1e-12));
  CHECK(cubic_coeff(p) == doctest::Approx(3.0 * gamma_opt(p) * 100.0).epsilon(1e-13));
  CHECK(rel_diff(cubic_coeff(p), -fd_third(p) / 6.0) < 1e-4);

  auto edge = p;
  edge.drive.Delta = 1.0;
  CHECK(cubic_coeff(edge) == 0.0);

  auto outside = with_photon_number(p, 1.0);
  outside.drive.Delta = 1.5;
  CHECK(cubic_coeff(outside) < 0.0);

  SUBCASE("matches the third finite difference for random parameters") {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int k = 0; k < 500; ++k) {
      auto q = chiral::testing::random_params(rng);
      const double g = q.optical.gamma;
      const double D = std::abs(q.drive.Delta);
      // Skip draws where u_opt is near a zero (D ~ 0 or D ~ gamma).
      if (D < 0.05 * g || std::abs(D - g) < 0.05 * g) continue;
      ++checked;
      CHECK(rel_diff(-fd_third(q) / 6.0, cubic_coeff(q)) < 1e-4);
    }
    CHECK(checked > 300);
  }
}

TEST_CASE("normal form coefficients and branch") {
  auto p = figure_params();
  CHECK(omega_star_normal_form(1.0, p) == 0.0);
  CHECK(omega_star_normal_form(1.25, p) == doctest::Approx(0.028867513459481294).epsilon(1e-13));
  CHECK(omega_star_normal_form(1.01, p) == doctest::Approx(0.0057735026918962614).epsilon(1e-13));

  CHECK_THROWS_AS(omega_star_normal_form(0.9, p), std::domain_error);
  auto wide = p;
  wide.drive.Delta = 1.2;
  CHECK_THROWS_AS(omega_star_normal_form(1.5, wide), std::domain_error);
  auto neg = p;
  neg.drive.Delta = -0.2;
  CHECK_THROWS_AS(omega_star_normal_form(1.5, neg), std::domain_error);

  const auto c = normal_form_coeffs(with_pump_ratio(p, 1.5));
  CHECK(c.r == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(c.mu.has_value());
  CHECK(*c.mu == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(c.u_opt > 0.0);
}

TEST_CASE("optimal_detuning") {
  auto p = figure_params();
  CHECK(optimal_detuning(p) == doctest::Approx(0.57735026918962576).epsilon(1e-15));
  p.optical.gamma = 2.0;
  CHECK(optimal_detuning(p) == doctest::Approx(1.1547005383792515).epsilon(1e-15));

  SUBCASE("brute-force argmin over a 1e4-point detuning grid") {
    auto q = figure_params();
    const std::size_t n = 10000;
    const double hi = 3.0 * q.optical.gamma;
    const double step = hi / double(n + 1);
    double best = 0.0, best_val = INFINITY;
    for (std::size_t i = 1; i <= n; ++i) {
      q.drive.Delta = step * double(i);
      const double v = *n_threshold(q);
      if (v < best_val) {
        best_val = v;
        best = q.drive.Delta;
      }
    }
    CHECK(std::abs(best - optimal_detuning(q)) <= step);
  }
}

TEST_CASE("parameter validation") {
  auto p = figure_params();
  CHECK_NOTHROW(validate(p));
  auto bad = p;
  bad.optical.m = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.optical.kappa_ex = 2.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.optical.J = -0.1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.drive.pump_mode = FrequencyOffset{1.5};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.mech.Gamma_phi = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  auto neg = p;
  neg.drive.Delta = -0.3;
  CHECK_THROWS_AS(with_pump_ratio(neg, 1.5), std::domain_error);
}

TEST_CASE("default pump offset sits between the mechanical rate and gamma") {
  auto p = figure_params();
  CHECK(default_pump_offset(p) == doctest::Approx(0.01));
  p.mech.I = 1e8;
  CHECK(default_pump_offset(p) == doctest::Approx(1e-4));
  p.mech.I = 100.0;
  CHECK(default_pump_offset(p) == doctest::Approx(0.1));
}

TEST_CASE("derived observables") {
  auto p = figure_params();
  FieldState s{{1.0, 1.0}, {0.5, 0.0}, 0.1, 0.002};
  const auto o = observe(s, p);
  CHECK(o.n_plus == doctest::Approx(2.0));
  CHECK(o.n_minus == doctest::Approx(0.25));
  CHECK(o.N == doctest::Approx(2.25));
  CHECK(o.L_opt == doctest::Approx(17.5));
  CHECK(o.L_phi == doctest::Approx(20.0));
  CHECK(o.tau_inst == doctest::Approx(instantaneous_torque(s, p)));
}
