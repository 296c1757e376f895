#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qslspin/errors.hpp"
#include "qslspin/geometry.hpp"
#include "qslspin/qsl.hpp"

using namespace qslspin;
using namespace qslspin::qsl;
using dynamics::FieldParams;
using elliptic::EllipticModulus;
using spin::QuantumState;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Spin spin_of(double s) { return Spin::from_value(s); }

// pi^2 sqrt(S) / (sqrt(2) h E(-H^2/h^2)) with E from the tanh-sinh oracle.
double tau_qsl_oracle(double s, double h, double H) {
  return kPi * kPi * std::sqrt(s) / (std::sqrt(2.0) * h * oracle::E(0.5 * kPi, -H * H / (h * h)));
}

double tau1_qsl_oracle(double s, double h, double H) {
  return kPi * kPi /
         (h * std::pow(2.0 * s, 1.5) * oracle::E(kPi / (2.0 * s), -H * H / (h * h)));
}

}  // namespace

TEST_CASE("energy variance examples") {
  const auto sys = spin::make_spin_system(0.5);
  const auto up = QuantumState::highest_weight(sys);
  CHECK(energy_variance(up, 3.0 * sys.c1()) == Approx(9.0 / 4.0));
  CHECK(energy_variance(up, sys.c1() + 5.0 * sys.c3()) == Approx(0.25));
  CHECK(energy_variance(up, sys.c3()) == 0.0);
  const auto one = spin::make_spin_system(1.0);
  CHECK(energy_variance(QuantumState::highest_weight(one), one.c2()) == Approx(0.5));
  CHECK(energy_variance(QuantumState::basis_state(one, 1), one.c1()) == Approx(1.0));
  CHECK_THROWS_AS(energy_variance(up, one.c1()), Error);
}

TEST_CASE("speed normalisations") {
  CHECK(p_factor(spin_of(0.5)) == 1.0);
  CHECK(p_factor(spin_of(1.0)) == 0.75);
  CHECK(p_factor(spin_of(10.0)) == Approx(3.0 / 22.0));
  for (int twice = 1; twice <= 20; ++twice) {
    const Spin s = Spin::from_twice(twice);
    const double sv = s.value();
    CHECK(geodesic_p(s, bloch_radius(s)) == Approx(9.0 / (4.0 * (sv + 1.0) * (sv + 1.0))).epsilon(1e-14));
  }
  CHECK(geodesic_p(spin_of(0.5), 1.0) == Approx(p_factor(spin_of(0.5))));
  CHECK(geodesic_p(spin_of(1.0), 1.0) == Approx(0.375));
  CHECK_THROWS_AS(geodesic_p(spin_of(1.0), 0.0), Error);
}

TEST_CASE("speed of the hodograph equals 2 sqrt(p) times the energy spread") {
  for (double s : {0.5, 1.0, 2.5}) {
    const auto sys = spin::make_spin_system(s);
    const auto p = FieldParams::make(1.7, 0.9, 1.2, 1.4, 0.6);
    const auto traj = dynamics::propagate_numeric(QuantumState::highest_weight(sys), p, sys, 3.0, 6000, 10);
    const auto stats = energy_stats(traj);
    const auto frenet = geometry::frenet_analyze(geometry::hodograph(traj));
    const double scale = 2.0 * std::sqrt(p_factor(sys.spin()));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      worst = std::max(worst, std::abs(frenet.speed[i] - scale * stats.std_dev[i]));
    }
    CAPTURE(s);
    CHECK(worst < 1e-7);
    const auto len = hodograph_length(traj, p_factor(sys.spin()));
    CHECK(len.s == Approx(len.l).epsilon(1e-7));
  }
}

TEST_CASE("hodograph length rejects mixed states") {
  const auto sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::consistent_field(2, 1, 1, 0);
  const auto traj = dynamics::propagate_numeric(QuantumState::maximally_mixed(sys), p, sys, 1.0, 100);
  try {
    (void)hodograph_length(traj, 0.75);
    FAIL("expected NotPureState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPureState);
  }
}

TEST_CASE("time-averaged spread") {
  EnergyStats stats;
  stats.times = {0.0, 1.0, 2.0, 3.0};
  stats.std_dev = {2.0, 2.0, 2.0, 2.0};
  stats.variance = {4.0, 4.0, 4.0, 4.0};
  CHECK(time_averaged_std_dev(stats, 2.5) == Approx(2.0));
  stats.std_dev = {0.0, 1.0, 2.0, 3.0};
  CHECK(time_averaged_std_dev(stats, 2.5) == Approx(1.25));
  CHECK(time_averaged_std_dev(stats, 3.0) == Approx(1.5));
  CHECK_THROWS_AS(time_averaged_std_dev(stats, 3.5), Error);
}

TEST_CASE("pole-to-pole distance") {
  CHECK(pole_distance(2.0, 1.0, EllipticModulus(0.0), spin_of(0.5)) ==
        Approx(3.3295836107826757117).epsilon(1e-13));
  CHECK(pole_distance(10.0, 1.0, EllipticModulus(0.5), spin_of(1.0)) ==
        Approx(3.857184895543427).epsilon(1e-12));

  SUBCASE("k = 0 against 2 r_B E(-H^2/h^2)") {
    for (double s : {0.5, 1.0, 4.0}) {
      for (double h : {0.3, 1.0, 7.0}) {
        for (double H : {0.0, 0.5, 3.0}) {
          const double expected = bloch_radius(spin_of(s)) * oracle::E(kPi, -H * H / (h * h));
          CHECK(pole_distance(h, H, EllipticModulus(0.0), spin_of(s)) ==
                Approx(expected).epsilon(1e-12));
        }
      }
    }
  }
  SUBCASE("k > 0 against the oracle integrand") {
    const double h = 1.5, H = 2.0, k = 0.6;
    const double r_b = bloch_radius(spin_of(1.0));
    const double expected =
        r_b * oracle::tanh_sinh(
                  [&](double t) {
                    const double sn = std::sin(h * t);
                    const double dn = oracle::sncndn(H * t, k).dn;
                    return std::sqrt(h * h + H * H * sn * sn * dn * dn);
                  },
                  0.0, kPi / h, 1e-13);
    CHECK(pole_distance(h, H, EllipticModulus(k), spin_of(1.0)) == Approx(expected).epsilon(1e-11));
  }
  SUBCASE("tends to pi r_B as h grows, with error ~ h^-2") {
    const double r_b = bloch_radius(spin_of(0.5));
    double prev = 0.0;
    for (double h : {10.0, 100.0, 1000.0}) {
      const double err = pole_distance(h, 1.0, EllipticModulus(0.5), spin_of(0.5)) - kPi * r_b;
      CHECK(err > 0.0);
      if (prev > 0.0) CHECK(std::log10(prev / err) == Approx(2.0).epsilon(2e-3));
      prev = err;
    }
  }
  CHECK(pole_distance(3.0, 0.0, EllipticModulus(0.0), spin_of(1.0)) ==
        Approx(kPi * bloch_radius(spin_of(1.0))));
  try {
    (void)pole_distance(2.0, 1.0, EllipticModulus(0.5), spin_of(1.5));
    FAIL("expected NotApplicable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotApplicable);
  }
  CHECK_THROWS_AS(pole_distance(0.0, 1.0, EllipticModulus(0.0), spin_of(1.0)), Error);
  CHECK_THROWS_AS(pole_distance(1.0, -1.0, EllipticModulus(0.0), spin_of(1.0)), Error);
}

TEST_CASE("speed limit times") {
  CHECK(tau_qsl(spin_of(0.5), 2.0, 1.0) == Approx(1.4821079082).epsilon(1e-10));
  CHECK(tau1_qsl(spin_of(2.0), 2.0, 1.0) == Approx(0.768275275271831).epsilon(1e-13));
  for (double s : {0.5, 1.0, 1.5, 3.0}) {
    for (double h : {0.2, 1.0, 5.0}) {
      for (double H : {0.5, 2.0}) {
        CAPTURE(s);
        CAPTURE(h);
        CHECK(tau_qsl(spin_of(s), h, H) == Approx(tau_qsl_oracle(s, h, H)).epsilon(1e-12));
        CHECK(tau1_qsl(spin_of(s), h, H) == Approx(tau1_qsl_oracle(s, h, H)).epsilon(1e-12));
      }
    }
  }
  CHECK(tau_qsl_limit(spin_of(2.0), 1.0) == Approx(kPi * kPi));
  CHECK_THROWS_AS(tau_qsl(spin_of(1.0), 0.0, 1.0), Error);
}

TEST_CASE("speed limit times decrease with h") {
  for (double s : {0.5, 2.0}) {
    double prev = tau_qsl(spin_of(s), 0.01, 1.0);
    double prev1 = tau1_qsl(spin_of(s), 0.01, 1.0);
    for (double h = 0.02; h < 50.0; h *= 1.3) {
      const double t = tau_qsl(spin_of(s), h, 1.0);
      const double t1 = tau1_qsl(spin_of(s), h, 1.0);
      CHECK(t < prev);
      CHECK(t1 < prev1);
      prev = t;
      prev1 = t1;
    }
  }
}

TEST_CASE("small-h limits") {
  for (int twice = 1; twice <= 8; ++twice) {
    const Spin s = Spin::from_twice(twice);
    CAPTURE(s.value());
    CHECK(tau_qsl(s, 1e-7, 1.3) == Approx(tau_qsl_limit(s, 1.3)).epsilon(1e-9));
    CHECK(tau1_qsl(s, 1e-7, 1.3) == Approx(tau1_qsl_limit(s, 1.3)).epsilon(1e-9));
    CHECK(tau_qsl_limit(s, 1.3) / tau1_qsl_limit(s, 1.3) == Approx(ratio_limit(s)).epsilon(1e-13));
  }
}

TEST_CASE("nearest integer rounds ties to even") {
  CHECK(nearest_integer(0.5) == 0);
  CHECK(nearest_integer(1.5) == 2);
  CHECK(nearest_integer(2.5) == 2);
  CHECK(nearest_integer(0.25) == 0);
  CHECK(nearest_integer(-1.5) == -2);
}

TEST_CASE("ratio of limits") {
  CHECK(ratio_limit(spin_of(0.5)) == Approx(1.0).epsilon(1e-14));
  CHECK(ratio_limit(spin_of(1.0)) == Approx(2.0).epsilon(1e-14));
  CHECK(ratio_limit(spin_of(1.5)) == Approx(2.25).epsilon(1e-14));
  CHECK(ratio_limit(spin_of(2.0)) == Approx(8.0 * (1.0 - std::sqrt(0.5))).epsilon(1e-14));
  CHECK(ratio_limit(50.0) == Approx(kPi * kPi / 4.0).epsilon(1e-4));
  CHECK(ratio_limit(10.0) == Approx(ratio_limit(spin_of(10.0))));
  double prev = 0.0;
  for (double s = 0.5; s <= 60.0; s += 0.5) {
    const double r = ratio_limit(s);
    CHECK(r > prev);
    CHECK(r < kPi * kPi / 4.0);
    // 2 S^2 (1 - cos(pi/(2S))) = 4 S^2 sin^2(pi/(4S)).
    const double half_angle = std::sin(kPi / (4.0 * s));
    CHECK(r == Approx(4.0 * s * s * half_angle * half_angle).epsilon(1e-13));
    prev = r;
  }
  try {
    (void)ratio_limit(0.75);
    FAIL("expected InvalidSpin");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpin);
  }
}

TEST_CASE("Mandelstam-Tamm margins along resonance dynamics") {
  for (double s : {0.5, 1.0, 2.0}) {
    const auto sys = spin::make_spin_system(s);
    const auto p = FieldParams::consistent_field(2.0, 1.0, 1.0, 0.0);
    const auto traj = dynamics::propagate_numeric(QuantumState::highest_weight(sys), p, sys, kPi / 2, 8000);
    const auto r = mt_check(traj, sys.spin(), kPi / 2, BoundKind::Full);
    CAPTURE(s);
    CHECK(r.enforced);
    CHECK(r.satisfied);
    CHECK(r.mt_margin >= -kMarginSlack);
    CHECK(r.mt1_margin >= -kMarginSlack);
    CHECK(r.tau == Approx(kPi / 2));
    CHECK(r.tau1 == Approx(kPi / (2.0 * 2.0 * s)));
    const auto first = mt_check(traj, sys.spin(), r.tau1, BoundKind::FirstOrthogonal);
    CHECK(first.mt1_margin == Approx(r.mt1_margin).epsilon(1e-12));
  }
  const auto sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::consistent_field(2.0, 1.0, 1.0, 0.0);
  const auto short_traj = dynamics::propagate_numeric(QuantumState::highest_weight(sys), p, sys, 1.0, 100);
  CHECK_THROWS_AS(mt_check(short_traj, sys.spin(), kPi / 2, BoundKind::Full), Error);
  CHECK_THROWS_AS(mt_check(short_traj, spin_of(0.5), 0.5, BoundKind::Full), Error);
  const auto r = mt_check(short_traj, sys.spin(), 0.5, BoundKind::FirstOrthogonal);
  CHECK(std::isnan(r.mt_margin));
}

TEST_CASE("margins are reported outside the closed-form regime") {
  const auto sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::consistent_field(2.0, 1.0, 1.0, 0.5);
  const auto traj = dynamics::propagate_numeric(QuantumState::highest_weight(sys), p, sys, kPi / 2, 2000);
  const auto r = mt_check(traj, sys.spin(), kPi / 2, BoundKind::Full);
  CHECK(std::isfinite(r.tau_margin));
  CHECK(r.tau_margin == Approx(r.tau - r.tau_qsl));
  const auto mixed = dynamics::propagate_numeric(QuantumState::maximally_mixed(sys), p, sys, kPi / 2, 200);
  CHECK_FALSE(mt_check(mixed, sys.spin(), kPi / 2, BoundKind::Full).enforced);
}

TEST_CASE("geodesic model") {
  for (double t : {0.0, 0.4, 3.0}) {
    const auto r = geodesic_model(spin_of(1.0), 1.5, 2.0, t);
    CHECK(r.norm() == Approx(2.0));
    CHECK(r.r(2) == 0.0);
  }
  CHECK(geodesic_model(spin_of(1.0), 2.0, 1.0, kPi / 4).r(1) == Approx(1.0));
  CHECK_THROWS_AS(geodesic_model(spin_of(1.0), 0.0, 1.0, 0.0), Error);
}
