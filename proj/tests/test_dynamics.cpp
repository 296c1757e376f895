#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qslspin/dynamics.hpp"
#include "qslspin/errors.hpp"

using namespace qslspin;
using namespace qslspin::dynamics;
using spin::QuantumState;
using spin::SpinSystem;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double state_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST_CASE("field parameters") {
  CHECK_THROWS_AS(FieldParams::make(-1, 1, 1, 1, 0), Error);
  CHECK_THROWS_AS(FieldParams::make(1, 1, 1, 0, 0), Error);
  CHECK_THROWS_AS(FieldParams::make(1, 1, 1, 1, 1.5), Error);
  const auto p = FieldParams::make(2, 2.5, 1, 1.5, 0.3);
  CHECK_FALSE(p.consistent());
  CHECK_FALSE(p.resonant());
  CHECK(p.delta() == Approx(-0.5));
  CHECK(p.fastest_rate() == 2.5);
  const auto q = FieldParams::consistent_field(2, 1, 1, 0.5);
  CHECK(q.consistent());
  CHECK(q.resonant());
  CHECK(q.h() == 2.0);
}

TEST_CASE("field values") {
  const auto p = FieldParams::make(2, 3, 1.5, 1, 0);
  const Vector3 f0 = field_at(0.0, p);
  CHECK(f0(0) == 2.0);
  CHECK(f0(1) == 0.0);
  CHECK(f0(2) == 1.5);
  const Vector3 fq = field_at(0.5 * kPi, p);
  CHECK(std::abs(fq(0)) < 1e-15);
  CHECK(fq(1) == Approx(3.0));
  CHECK(fq(2) == Approx(1.5));

  const auto q = FieldParams::make(1.2, 0.7, 0.4, 1.7, 0.8);
  const auto times = linspace(-3.0, 9.0, 97);
  const auto grid = field_on_grid(times, q);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK((grid[i] - field_at(times[i], q)).norm() < 1e-14);
  }
  for (double t : {0.0, 0.9, 4.1}) {
    const Vector3 f = field_at(t, q);
    const double u = q.omega * t;
    const auto ref = oracle::sncndn(u, 0.8);
    CHECK(f(0) == Approx(1.2 * ref.cn).epsilon(1e-12));
    CHECK(f(1) == Approx(0.7 * ref.sn).epsilon(1e-12));
    CHECK(f(2) == Approx(0.4 * ref.dn).epsilon(1e-12));
  }
}

TEST_CASE("Hamiltonian is Hermitian and linear in the field") {
  const SpinSystem sys = spin::make_spin_system(1.5);
  const auto p = FieldParams::make(1.1, 0.4, 2.0, 0.9, 0.6);
  for (double t : {0.0, 0.3, 2.7, 11.0}) {
    const ComplexMatrix h = hamiltonian_at(t, p, sys);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const Vector3 f = field_at(t, p);
    const ComplexMatrix expected = f(0) * sys.c1() + f(1) * sys.c2() + f(2) * sys.c3();
    CHECK(state_distance(h, expected) < 1e-14);
  }
}

TEST_CASE("default step density") {
  const auto p = FieldParams::consistent_field(2, 1, 1, 0);
  CHECK(default_step_count(p, kPi) == 629);
  CHECK(default_step_count(p, 1e-9) == 1);
}

TEST_CASE("propagation arguments are validated") {
  const SpinSystem sys = spin::make_spin_system(1.0);
  const auto rho = QuantumState::highest_weight(sys);
  const auto p = FieldParams::consistent_field(2, 1, 1, 0);
  CHECK_THROWS_AS(propagate_numeric(rho, p, sys, 1.0, 0), Error);
  CHECK_THROWS_AS(propagate_numeric(rho, p, sys, 0.0, 10), Error);
  CHECK_THROWS_AS(propagate_numeric(rho, p, sys, 1.0, 10, 0), Error);
  const SpinSystem other = spin::make_spin_system(0.5);
  try {
    (void)propagate_numeric(QuantumState::highest_weight(other), p, sys, 1.0, 10);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("recording stride keeps the final sample") {
  const SpinSystem sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::consistent_field(2, 1, 1, 0);
  const auto traj = propagate_numeric(QuantumState::highest_weight(sys), p, sys, 1.0, 10, 3);
  REQUIRE(traj.size() == 5);
  CHECK(traj.times[1] == Approx(0.3));
  CHECK(traj.times[3] == Approx(0.9));
  CHECK(traj.times.back() == 1.0);
  CHECK(traj.states.size() == traj.coherence.size());
}

TEST_CASE("a state commuting with a static field does not move") {
  const SpinSystem sys = spin::make_spin_system(2.0);
  const auto p = FieldParams::make(0, 0, 1.7, 1, 0);
  const auto rho = QuantumState::basis_state(sys, 1);
  const auto traj = propagate_numeric(rho, p, sys, 5.0, 200);
  for (const auto& s : traj.states) CHECK(state_distance(s.matrix(), rho.matrix()) < 1e-14);
}

TEST_CASE("numeric propagation agrees with an RK4 oracle") {
  const SpinSystem sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::make(1.3, 0.8, 1.1, 1.6, 0.7);
  const auto mats = oracle::spin_one();
  auto hamiltonian = [&](double t) -> Eigen::MatrixXcd {
    const auto f = oracle::sncndn(p.omega * t, 0.7);
    return 1.3 * f.cn * mats[0] + 0.8 * f.sn * mats[1] + 1.1 * f.dn * mats[2];
  };
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(3);
  psi(0) = 1.0;
  const double t_end = 2.5;
  const Eigen::VectorXcd ref = oracle::rk4(hamiltonian, psi, 0.0, t_end, 4000);
  const ComplexMatrix rho_ref = ref * ref.adjoint();
  const auto traj = propagate_numeric(QuantumState::pure(psi), p, sys, t_end, 20000);
  CHECK(state_distance(traj.states.back().matrix(), rho_ref) < 1e-7);
}

TEST_CASE("exponential midpoint scheme is second order") {
  const SpinSystem sys = spin::make_spin_system(0.5);
  const auto p = FieldParams::make(1.0, 1.4, 0.6, 2.0, 0.5);
  const auto rho = QuantumState::highest_weight(sys);
  const double t_end = 3.0;
  const auto ref = propagate_numeric(rho, p, sys, t_end, 64000).states.back().matrix();
  double previous = 0.0;
  for (int n : {250, 500, 1000}) {
    const double err = state_distance(propagate_numeric(rho, p, sys, t_end, n).states.back().matrix(), ref);
    if (previous > 0.0) {
      const double order = std::log2(previous / err);
      CAPTURE(n);
      CHECK(order == Approx(2.0).epsilon(0.05));
    }
    previous = err;
  }
}

TEST_CASE("evolution preserves purity, trace and Hermiticity") {
  const SpinSystem sys = spin::make_spin_system(1.5);
  const auto p = FieldParams::make(0.9, 1.2, 0.5, 1.3, 0.85);
  ComplexMatrix mixed = 0.6 * QuantumState::basis_state(sys, 0).matrix() +
                        0.4 * QuantumState::basis_state(sys, 2).matrix();
  const auto rho = QuantumState::from_matrix(mixed);
  const auto traj = propagate_numeric(rho, p, sys, 6.0, 3000, 50);
  for (const auto& s : traj.states) {
    CHECK(s.purity() == Approx(rho.purity()).epsilon(1e-12));
    CHECK(std::abs(s.matrix().trace().real() - 1.0) < 1e-12);
    CHECK((s.matrix() - s.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("running the same grid backwards returns the initial state") {
  const SpinSystem sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::make(2.0, 1.5, 1.0, 1.2, 0.4);
  const auto rho = QuantumState::highest_weight(sys);
  const auto forward = propagate_segment(rho, p, sys, 0.0, 4.0, 700);
  const auto back = propagate_segment(forward.states.back(), p, sys, 4.0, 0.0, 700);
  CHECK(back.times.back() == 0.0);
  CHECK(state_distance(back.states.back().matrix(), rho.matrix()) < 1e-9);
}

TEST_CASE("alpha propagator validity") {
  const auto probe = linspace(0.0, 2.0 * kPi, 64);
  SUBCASE("k = 0 is exact for every spin, on or off resonance") {
    for (int twice : {1, 2, 3, 6}) {
      const SpinSystem sys{Spin::from_twice(twice)};
      CHECK(build_alpha_propagator(FieldParams::consistent_field(2, 1, 1, 0), sys, probe).validity() ==
            AlphaValidity::Exact);
      CHECK(build_alpha_propagator(FieldParams::consistent_field(0.7, 1.9, 1.3, 0), sys, probe)
                .validity() == AlphaValidity::Exact);
    }
  }
  SUBCASE("S = 1 at resonance is exact for k > 0") {
    const SpinSystem sys = spin::make_spin_system(1.0);
    for (double k : {0.3, 0.5, 0.9}) {
      const auto a = build_alpha_propagator(FieldParams::consistent_field(2, 1, 1, k), sys, probe);
      CHECK(a.validity() == AlphaValidity::Exact);
      CHECK(a.max_deviation() < 1e-12);
    }
  }
  SUBCASE("other spins with k > 0 are not covered") {
    const auto p = FieldParams::consistent_field(2, 1, 1, 0.7);
    const auto a = build_alpha_propagator(p, spin::make_spin_system(1.5), probe);
    CHECK(a.validity() == AlphaValidity::NotApplicable);
    CHECK(a.max_deviation() > 1e-3);
    CHECK_THROWS_AS((void)a.unitary(1.0), Error);
    const auto half = build_alpha_propagator(FieldParams::consistent_field(2, 1, 1, 0.5),
                                             spin::make_spin_system(0.5), probe);
    CHECK(half.validity() == AlphaValidity::NotApplicable);
  }
  SUBCASE("off resonance with k > 0 is not covered") {
    const auto a = build_alpha_propagator(FieldParams::consistent_field(2, 1.5, 1, 0.5),
                                          spin::make_spin_system(1.0), probe);
    CHECK(a.validity() == AlphaValidity::NotApplicable);
  }
  CHECK_THROWS_AS(build_alpha_propagator(FieldParams::consistent_field(2, 1, 1, 0),
                                         spin::make_spin_system(1.0), std::vector<double>{}),
                  Error);
}

TEST_CASE("alpha propagator matches numeric propagation") {
  const auto times = linspace(0.0, 2.0 * kPi, 41);
  struct Case {
    double s, h, H, omega, k;
  };
  for (const Case c : {Case{1.0, 2.0, 1.0, 1.0, 0.5}, Case{1.0, 0.7, 3.0, 3.0, 0.9},
                       Case{2.5, 1.3, 0.8, 2.1, 0.0}, Case{0.5, 2.0, 1.0, 1.0, 0.0}}) {
    CAPTURE(c.s);
    CAPTURE(c.k);
    const SpinSystem sys = spin::make_spin_system(c.s);
    const auto p = FieldParams::consistent_field(c.h, c.H, c.omega, c.k);
    const auto a = build_alpha_propagator(p, sys, times);
    REQUIRE(a.validity() == AlphaValidity::Exact);
    const auto rho = QuantumState::highest_weight(sys);
    const auto exact = a.evolve(rho, times);
    const auto numeric = propagate_numeric(rho, p, sys, 2.0 * kPi, 40000, 1000);
    REQUIRE(numeric.size() == exact.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      worst = std::max(worst, (exact.coherence[i].r - numeric.coherence[i].r).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-7);
    const ComplexMatrix u = a.unitary(1.3);
    CHECK((u * u.adjoint() - ComplexMatrix::Identity(sys.dimension(), sys.dimension()))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
}

TEST_CASE("resonance closed form") {
  const SpinSystem sys = spin::make_spin_system(1.0);
  const auto p = FieldParams::consistent_field(2, 1, 1, 0.5);
  const double r_b = sys.bloch_radius();
  const auto at0 = analytic_resonance_spin(0.0, p, sys);
  CHECK(at0.r(0) == 0.0);
  CHECK(at0.r(2) == Approx(r_b));
  const auto half = analytic_resonance_spin(0.5 * kPi, p, sys);
  CHECK(half.r(2) == Approx(-r_b));
  CHECK(std::abs(half.r(0)) < 1e-15);
  for (double t : {0.3, 1.1, 2.9, 5.0}) {
    CHECK(analytic_resonance_spin(t, p, sys).norm() == Approx(r_b).epsilon(1e-14));
  }

  const auto times = linspace(0.0, kPi, 11);
  const auto traj = propagate_numeric(QuantumState::highest_weight(sys), p, sys, kPi, 20000, 2000);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto expected = analytic_resonance_spin(traj.times[i], p, sys);
    CHECK((traj.coherence[i].r - expected.r).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("closed form guards") {
  CHECK(analytic_resonance_applicable(FieldParams::consistent_field(2, 1, 1, 0.5), Spin::from_twice(2)));
  CHECK(analytic_resonance_applicable(FieldParams::consistent_field(2, 1, 1, 0.0), Spin::from_twice(9)));
  CHECK_FALSE(
      analytic_resonance_applicable(FieldParams::consistent_field(2, 1, 1, 0.5), Spin::from_twice(3)));
  CHECK_FALSE(
      analytic_resonance_applicable(FieldParams::consistent_field(2, 1.2, 1, 0.0), Spin::from_twice(2)));
  CHECK_FALSE(analytic_resonance_applicable(FieldParams::make(2, 1, 1, 1, 0.0), Spin::from_twice(2)));
  try {
    (void)analytic_resonance_spin(1.0, FieldParams::consistent_field(2, 1, 1, 0.5),
                                  spin::make_spin_system(1.5));
    FAIL("expected NotApplicable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotApplicable);
  }
}

TEST_CASE("spin-coherent evolution of the coherence vector does not depend on S") {
  const auto p = FieldParams::make(1.4, 0.9, 0.6, 1.1, 0.75);
  std::vector<dynamics::Trajectory> runs;
  for (int twice : {1, 2, 3, 5}) {
    const SpinSystem sys{Spin::from_twice(twice)};
    runs.push_back(propagate_numeric(QuantumState::highest_weight(sys), p, sys, 4.0, 2000, 100));
  }
  for (std::size_t i = 0; i < runs[0].size(); ++i) {
    const Vector3 unit = runs[0].coherence[i].r / runs[0].coherence[i].bloch_radius;
    for (std::size_t j = 1; j < runs.size(); ++j) {
      const Vector3 other = runs[j].coherence[i].r / runs[j].coherence[i].bloch_radius;
      CHECK((unit - other).norm() < 1e-12);
    }
  }
}
