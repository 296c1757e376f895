#pragma once

#include <vector>

#include "qslspin/dynamics.hpp"
#include "qslspin/elliptic.hpp"
#include "qslspin/spin_algebra.hpp"

namespace qslspin::qsl {

// Tr(rho H^2) - (Tr rho H)^2, clamped at 0 when round-off drives it below
// zero by no more than 1e-12. Throws Error(DimensionMismatch).
double energy_variance(const spin::QuantumState& rho, const ComplexMatrix& hamiltonian);

struct EnergyStats {
  std::vector<double> times;
  std::vector<double> variance;
  std::vector<double> std_dev;
};

// Energy spread along a trajectory, with H(t) rebuilt from its field.
EnergyStats energy_stats(const dynamics::Trajectory& traj);

// (1/tau) int_0^tau std_dev dt by the trapezoid rule; the last cell is cut at
// tau with linear interpolation. Throws Error(InsufficientCoverage) when the
// samples do not span [0, tau].
double time_averaged_std_dev(const EnergyStats& stats, double tau);

struct HodographLength {
  double s = 0.0;  // 2 sqrt(p) int Delta E dt
  double l = 0.0;  // int |R'| dt
};

// Throws Error(NotPureState) for a mixed initial state.
HodographLength hodograph_length(const dynamics::Trajectory& traj, double p_factor);

// 3 / (2 (S + 1)).
double p_factor(Spin s) noexcept;
// 3 r_b^2 / (4 S (S + 1)).
double geodesic_p(Spin s, double r_b);

// r_B int_0^{pi/h} sqrt(h^2 + H^2 sin^2(ht) dn^2(Ht|k)) dt by adaptive
// Gauss-Kronrod. Throws Error(NotApplicable) unless S <= 1 or k = 0, and
// Error(InvalidParameter) for h <= 0 or H < 0.
double pole_distance(double h, double H, elliptic::EllipticModulus k, Spin s);

// pi^2 sqrt(S) / (sqrt(2) h E(-H^2/h^2)).
double tau_qsl(Spin s, double h, double H);
// h -> 0: pi^2 sqrt(S) / (sqrt(2) H).
double tau_qsl_limit(Spin s, double H);

// pi^2 / (h (2S)^{3/2} E(pi/(2S) | -H^2/h^2)). This is the form whose h -> 0
// limit is tau1_qsl_limit below.
double tau1_qsl(Spin s, double h, double H);
// pi^2 / (H (2S)^{3/2} ((-1)^r (1 - |cos(pi/(2S))|) + 2r)), r = r[1/(2S)].
double tau1_qsl_limit(Spin s, double H);

// Nearest integer, ties to even.
long nearest_integer(double x);

// lim_{h->0} tau_qsl / tau1_qsl = 2 S^2 int_0^{pi/(2S)} |sin v| dv,
// independent of H. The double overload accepts any half-integer S >= 1/2
// (the closed form has no dimension cap). Throws Error(InvalidSpin).
double ratio_limit(Spin s);
double ratio_limit(double s);

enum class BoundKind { Full, FirstOrthogonal };

struct QslReport {
  Spin spin = Spin::from_twice(1);
  double h = 0.0;
  double H = 0.0;
  double tau = 0.0;   // pi / h
  double tau1 = 0.0;  // pi / (2 S h)
  double tau_qsl = 0.0;
  double tau1_qsl = 0.0;
  double p_factor = 0.0;
  BoundKind which = BoundKind::Full;
  // Time-averaged energy spread over the requested interval.
  double averaged_std_dev = 0.0;
  // Delta E_tau tau - sqrt(S/2) pi and Delta E_tau1 tau1 - pi/(2 sqrt(2S));
  // NaN when the trajectory does not cover the interval.
  double mt_margin = 0.0;
  double mt1_margin = 0.0;
  // tau - tau_qsl and tau1 - tau1_qsl.
  double tau_margin = 0.0;
  double tau1_margin = 0.0;
  // The inequalities are asserted only for dynamics within the closed-form
  // regime (consistent resonant field, S <= 1 or k = 0) from a pure state.
  bool enforced = false;
  bool satisfied = true;
};

inline constexpr double kMarginSlack = 1e-9;

// `tau` is the length of the interval for `which`. Throws
// Error(InsufficientCoverage) when the trajectory misses [0, tau] and
// Error(DimensionMismatch) when s does not match the trajectory.
QslReport mt_check(const dynamics::Trajectory& traj, Spin s, double tau, BoundKind which);

// r_b (cos eta t, sin eta t, 0). Throws Error(InvalidParameter) for eta <= 0.
spin::CoherenceVector geodesic_model(Spin s, double eta, double r_b, double t);

}  // namespace qslspin::qsl
