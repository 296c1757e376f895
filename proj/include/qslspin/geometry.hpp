#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qslspin/dynamics.hpp"
#include "qslspin/spin_algebra.hpp"

namespace qslspin::geometry {

struct SphericalAngles {
  double theta = 0.0;  // [0, pi], 0 at the north pole
  double phi = 0.0;    // [0, 2 pi)
};

// Throws Error(DegenerateVector) when |r| <= 1e-12.
SphericalAngles to_spherical(const Vector3& r);
SphericalAngles to_spherical(const spin::CoherenceVector& r);
Vector3 from_spherical(SphericalAngles angles, double radius);

struct AngularRates {
  double theta_rate = 0.0;  // nutation
  double phi_rate = 0.0;    // precession
};

// theta' = h sgn(sin ht) (sgn 0 = 0), phi' = w dn(wt|k). Throws
// Error(NotApplicable) off resonance.
AngularRates resonance_rates(double t, const dynamics::FieldParams& p);

struct Curve3D {
  std::vector<double> times;
  std::vector<Vector3> points;

  std::size_t size() const noexcept { return times.size(); }
  // Throws Error(InvalidGrid) unless sizes match, the grid is strictly
  // increasing and at least min_points samples exist.
  void validate(std::size_t min_points = 2) const;
};

std::vector<double> uniform_grid(double t0, double t1, int intervals);

// Coherence vectors of a trajectory as a curve.
Curve3D hodograph(const dynamics::Trajectory& traj);
// Resonance closed form sampled on a grid (same preconditions as
// dynamics::analytic_resonance_spin).
Curve3D analytic_hodograph(std::span<const double> times, const dynamics::FieldParams& p,
                           const spin::SpinSystem& sys);

struct CurveDerivatives {
  std::vector<Vector3> first;
  std::vector<Vector3> second;
  std::vector<Vector3> third;
};

// Finite differences from Fornberg weights on (up to) 7-point stencils:
// centred in the interior, shifted one-sided near the ends. Works on
// nonuniform grids.
CurveDerivatives differentiate(const Curve3D& c);

struct FrenetData {
  std::vector<double> times;
  std::vector<double> speed;
  std::vector<double> curvature;
  // NaN where |r' x r''|^2 < 1e-10 |r'|^6; torsion_defined[i] is 0 there.
  std::vector<double> torsion;
  std::vector<std::uint8_t> torsion_defined;
  std::vector<double> arclength;
  std::size_t undefined_torsion = 0;
};

// Needs at least 5 samples.
FrenetData frenet_analyze(const Curve3D& c);

// Closed-contour integral of r' . dr = int |r'|^2 dt (trapezoid). Throws
// Error(NotClosed) when |r(T) - r(0)| > 1e-8.
double circulation(const Curve3D& c);

struct ClosurePeriod {
  double period = 0.0;
  long m = 0;
  long l = 0;
};

// Smallest T = 2 pi m / h = pi l / w with m, l <= 10^4, found from the
// continued fraction of 2w/h (tolerance 1e-9). Empty when the ratio is not
// recognised as rational or the field is off resonance / k != 0.
std::optional<ClosurePeriod> closure_period(const dynamics::FieldParams& p, double h);

// Grid event detectors. Indices refer to the input span; NaN samples are
// skipped and the comparison continues from the nearest valid sample.
std::vector<std::size_t> sign_change_indices(std::span<const double> values);
std::vector<std::size_t> local_minimum_indices(std::span<const double> values);
std::vector<std::size_t> local_maximum_indices(std::span<const double> values);
std::vector<std::size_t> local_extremum_indices(std::span<const double> values);
// True when every event in `events` has a partner in `partners` no more than
// `window` samples away.
bool events_aligned(std::span<const std::size_t> events, std::span<const std::size_t> partners,
                    std::size_t window);

}  // namespace qslspin::geometry
