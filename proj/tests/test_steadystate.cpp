#include <doctest.h>

#include <cmath>
#include <random>

#include "chiral/dynamics.hpp"
#include "chiral/steadystate.hpp"
#include "chiral/theory.hpp"
#include "test_support.hpp"

using namespace chiral;
using chiral::testing::figure_params;
using chiral::testing::rel_diff;

TEST_CASE("find_steady_rotations at the figure operating point") {
  const auto p = figure_params();

  SUBCASE("below threshold only the rest state") {
    const auto set = find_steady_rotations(with_pump_ratio(p, 0.5));
    REQUIRE(set.roots.size() == 1);
    CHECK(set.roots[0].Omega == 0.0);
    CHECK(set.roots[0].stable);
    CHECK(set.selected_speed() == 0.0);
  }

  SUBCASE("above threshold a symmetric stable pair around an unstable rest") {
    const auto set = find_steady_rotations(with_pump_ratio(p, 1.5));
    REQUIRE(set.roots.size() == 3);
    CHECK(set.roots[0].stable);
    CHECK_FALSE(set.roots[1].stable);
    CHECK(set.roots[1].Omega == 0.0);
    CHECK(set.roots[2].stable);
    CHECK(set.roots[0].Omega == -set.roots[2].Omega);
    // Frozen from a 30-digit root of the torque balance.
    CHECK(set.roots[2].Omega == doctest::Approx(0.0349297105525004624).epsilon(1e-10));
    REQUIRE(set.mu.has_value());
    CHECK(*set.mu == doctest::Approx(1.5).epsilon(1e-12));
  }

  SUBCASE("near threshold") {
    const auto set = find_steady_rotations(with_pump_ratio(p, 1.01));
    const double root = set.selected_speed();
    CHECK(root == doctest::Approx(0.0057451287653914491).epsilon(1e-10));
    CHECK(rel_diff(root, omega_star_normal_form(1.01, p)) < 0.01);
  }

  SUBCASE("roots satisfy the torque balance") {
    const auto q = with_pump_ratio(p, 2.3);
    for (const auto& r : find_steady_rotations(q).roots) {
      CHECK(std::abs(torque_balance(r.Omega, q)) <= 1e-10 * q.mech.Gamma_phi * scan_range(q));
    }
  }

  SUBCASE("exactly at threshold the rest state is marginal") {
    const auto set = find_steady_rotations(with_pump_ratio(p, 1.0));
    CHECK(set.rest().marginal);
    CHECK(set.rest().stable);
    CHECK(set.stable_count() == 1);
  }

  SUBCASE("root inside the first scan cell is still found") {
    const auto set = find_steady_rotations(with_pump_ratio(p, 1.0 + 1e-6));
    REQUIRE(set.roots.size() == 3);
    CHECK(set.selected_speed() == doctest::Approx(omega_star_normal_form(1.0 + 1e-6, p)).epsilon(1e-3));
  }
}

TEST_CASE("steady rotation invariants over random parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    auto p = chiral::testing::random_params(rng);
    p.optical.J = std::max(p.optical.J, 0.01 * p.optical.gamma);
    if (const auto nth = n_threshold(p)) p = with_photon_number(p, *nth * 3.0 * u(rng));
    const auto set = find_steady_rotations(p);

    // Z2 pairing with identical stability.
    for (const auto& r : set.roots) {
      const auto mirror = std::find_if(set.roots.begin(), set.roots.end(),
                                       [&](const auto& o) { return o.Omega == -r.Omega; });
      REQUIRE(mirror != set.roots.end());
      CHECK(mirror->stable == r.stable);
    }
    for (std::size_t i = 1; i < set.roots.size(); ++i) {
      CHECK(set.roots[i].Omega > set.roots[i - 1].Omega);
    }

    // Negating Delta negates tau_rec, so one of the two detunings is purely
    // damping: only the rest state survives there.
    auto flipped = p;
    flipped.drive.Delta = -p.drive.Delta;
    const auto& damped = p.drive.Delta < 0.0 ? set : find_steady_rotations(flipped);
    REQUIRE(damped.roots.size() == 1);
    CHECK(damped.roots[0].stable);
  }
}

TEST_CASE("pitchfork criticality for 0 < Delta < gamma") {
  auto p = figure_params();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < 20; ++k) {
    p.drive.Delta = u(rng) * p.optical.gamma;
    CHECK(find_steady_rotations(with_pump_ratio(p, 1.0 - 1e-4)).stable_count() == 1);
    CHECK(find_steady_rotations(with_pump_ratio(p, 1.0 - 1e-4)).rest().stable);
    CHECK(find_steady_rotations(with_pump_ratio(p, 1.0 + 1e-4)).stable_count() == 2);
    CHECK_FALSE(find_steady_rotations(with_pump_ratio(p, 1.0 + 1e-4)).rest().stable);
  }
}

TEST_CASE("branch") {
  const auto p = figure_params();
  const std::vector<double> mu{0.0, 0.5, 1.0, 1.0001, 1.001, 1.01, 1.25, 1.5, 2.0, 3.0};
  const auto b = branch(mu, p);
  REQUIRE(b.omega_star.size() == mu.size());
  CHECK(b.omega_star[0] == 0.0);
  CHECK(b.omega_star[1] == 0.0);
  CHECK(b.omega_star[2] == 0.0);
  for (std::size_t i = 3; i < 6; ++i) CHECK(rel_diff(b.omega_star[i], b.normal_form[i]) < 0.01);
  CHECK(b.omega_star[7] < b.normal_form[7]);  // saturation bends the branch below the square root
  for (std::size_t i = 1; i < mu.size(); ++i) CHECK(b.omega_star[i] >= b.omega_star[i - 1]);
  CHECK(std::isnan(b.normal_form[1]));

  auto neg = p;
  neg.drive.Delta = -0.3;
  CHECK_THROWS_AS(branch(mu, neg), std::domain_error);
}

TEST_CASE("near-threshold law at the optimal detuning") {
  const auto p = figure_params();
  for (double eps : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
    const double exact = find_steady_rotations(with_pump_ratio(p, 1.0 + eps)).selected_speed();
    CHECK(std::abs(exact / omega_star_normal_form(1.0 + eps, p) - 1.0) <= 0.01);
  }
}

TEST_CASE("phase_diagram") {
  const auto p = figure_params();
  std::vector<double> delta{0.1, 0.3, 1.0 / std::sqrt(3.0), 0.8, 1.2, 2.0};
  std::vector<double> mu{0.0, 0.5, 0.9, 1.0, 1.1, 1.5, 2.5};
  const auto d = phase_diagram(delta, mu, p);
  REQUIRE(d.doppler.size() == delta.size() * mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
      CHECK(d.at(i, j) >= 0.0);
      if (mu[i] <= 1.0) CHECK(d.at(i, j) == 0.0);
      if (mu[i] > 1.0) CHECK(d.at(i, j) > 0.0);
    }
  }
  const auto lowest = std::min_element(d.threshold_line.begin(), d.threshold_line.end());
  CHECK(delta[std::size_t(lowest - d.threshold_line.begin())] == doctest::Approx(optimal_detuning(p)));

  // The Fig. 3-style number: 2 m Omega* / gamma at mu = 1.5, Delta = gamma/sqrt(3).
  CHECK(d.at(5, 2) == doctest::Approx(20.0 * 0.0349297105525004624).epsilon(1e-9));

  SUBCASE("subcritical detuning keeps a bistable outer branch below threshold") {
    // Delta = 2 gamma: the selected state at mu = 0.9 is rest, but a stable
    // rotation with 2m Omega ~ 2.3557 gamma coexists.
    CHECK(d.at(2, 5) == 0.0);
    CHECK(d.doppler_max_stable[2 * delta.size() + 5] == doctest::Approx(2.35573505).epsilon(1e-5));
    CHECK(d.doppler_max_stable[2 * delta.size() + 4] == 0.0);
  }

  std::vector<double> bad{0.0, 0.5};
  CHECK_THROWS_AS(phase_diagram(bad, mu, p), std::domain_error);
}

TEST_CASE("below-threshold relaxation rate vanishes at onset") {
  auto p = figure_params();
  p.mech.I = 100.0;
  IntegratorConfig cfg;
  cfg.max_step = 10.0;
  cfg.sample_dt = 0.0;
  const double seed = 1e-4 * p.optical.gamma / (2.0 * p.optical.m);
  for (double mu : {0.2, 0.5, 0.9}) {
    const auto q = with_pump_ratio(p, mu);
    const double expected = (q.mech.Gamma_phi - gamma_opt(q)) / q.mech.I;
    const double t_end = 5.0 / expected;
    const auto tr = integrate_reduced(seed, t_end, q, cfg);
    const double observed = std::log(seed / tr.final_state().Omega) / t_end;
    CHECK(rel_diff(observed, expected) < 0.01);
  }
}
