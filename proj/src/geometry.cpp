#include "qslspin/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qslspin/errors.hpp"
#include "qslspin/kernels.hpp"

namespace qslspin::geometry {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxStencil = 7;
constexpr int kDerivatives = 3;

// Fornberg (1988): weights[j][d] approximates the d-th derivative at z from
// samples at nodes[j].
void fornberg_weights(double z, std::span<const double> nodes,
                      std::array<std::array<double, kDerivatives + 1>, kMaxStencil>& weights) {
  const int n = static_cast<int>(nodes.size());
  for (auto& row : weights) row.fill(0.0);
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  weights[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, kDerivatives);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          weights[i][k] = c1 * (k * weights[i - 1][k - 1] - c5 * weights[i - 1][k]) / c2;
        }
        weights[i][0] = -c1 * c5 * weights[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        weights[j][k] = (c4 * weights[j][k] - k * weights[j][k - 1]) / c3;
      }
      weights[j][0] = c4 * weights[j][0] / c3;
    }
    c1 = c2;
  }
}

bool is_valid(double v) { return !std::isnan(v); }

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

SphericalAngles to_spherical(const Vector3& r) {
  const double norm = r.norm();
  if (!(norm > 1e-12)) {
    throw Error(ErrorCode::DegenerateVector, "cannot take spherical angles of a null vector");
  }
  const double theta = std::acos(std::clamp(r(2) / norm, -1.0, 1.0));
  double phi = std::atan2(r(1), r(0));
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return {theta, phi};
}

SphericalAngles to_spherical(const spin::CoherenceVector& r) { return to_spherical(r.r); }

Vector3 from_spherical(SphericalAngles a, double radius) {
  return radius * Vector3(std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi),
                          std::cos(a.theta));
}

AngularRates resonance_rates(double t, const dynamics::FieldParams& p) {
  if (!p.resonant()) {
    throw Error(ErrorCode::NotApplicable, "angular rates are given in closed form at resonance only");
  }
  const double s = std::sin(p.h() * t);
  const double sgn = (s > 0.0) - (s < 0.0);
  const double dn = elliptic::jacobi_sncndn(p.omega * t, p.k).dn;
  return {p.h() * sgn, p.omega * dn};
}

void Curve3D::validate(std::size_t min_points) const {
  if (times.size() != points.size()) {
    throw Error(ErrorCode::InvalidGrid, "curve times and points differ in length");
  }
  if (times.size() < min_points) {
    throw Error(ErrorCode::InvalidGrid,
                "curve needs at least " + std::to_string(min_points) + " samples");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::InvalidGrid, "curve time grid must be strictly increasing");
    }
  }
}

std::vector<double> uniform_grid(double t0, double t1, int intervals) {
  if (intervals < 1 || !(t1 > t0)) {
    throw Error(ErrorCode::InvalidGrid, "uniform grid needs t1 > t0 and at least one interval");
  }
  std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
  const double dt = (t1 - t0) / intervals;
  for (int i = 0; i <= intervals; ++i) grid[i] = t0 + i * dt;
  grid.back() = t1;
  return grid;
}

Curve3D hodograph(const dynamics::Trajectory& traj) {
  Curve3D c;
  c.times = traj.times;
  c.points.reserve(traj.coherence.size());
  for (const auto& r : traj.coherence) c.points.push_back(r.r);
  return c;
}

Curve3D analytic_hodograph(std::span<const double> times, const dynamics::FieldParams& p,
                           const spin::SpinSystem& sys) {
  Curve3D c;
  c.times.assign(times.begin(), times.end());
  c.points.reserve(times.size());
  for (double t : times) c.points.push_back(dynamics::analytic_resonance_spin(t, p, sys).r);
  return c;
}

CurveDerivatives differentiate(const Curve3D& c) {
  c.validate(2);
  const int n = static_cast<int>(c.size());
  const int width = std::min(kMaxStencil, n);
  CurveDerivatives out;
  out.first.resize(n);
  out.second.resize(n);
  out.third.resize(n);
  std::array<std::array<double, kDerivatives + 1>, kMaxStencil> w{};
  for (int i = 0; i < n; ++i) {
    const int start = std::clamp(i - width / 2, 0, n - width);
    fornberg_weights(c.times[i], std::span<const double>(c.times.data() + start, width), w);
    Vector3 d1 = Vector3::Zero(), d2 = Vector3::Zero(), d3 = Vector3::Zero();
    for (int j = 0; j < width; ++j) {
      const Vector3& p = c.points[start + j];
      d1 += w[j][1] * p;
      d2 += w[j][2] * p;
      d3 += w[j][3] * p;
    }
    out.first[i] = d1;
    out.second[i] = d2;
    out.third[i] = d3;
  }
  return out;
}

FrenetData frenet_analyze(const Curve3D& c) {
  c.validate(5);
  const std::size_t n = c.size();
  const CurveDerivatives d = differentiate(c);

  std::vector<double> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = d.first[i](0);
    y[i] = d.first[i](1);
    z[i] = d.first[i](2);
  }
  FrenetData f;
  f.times = c.times;
  f.speed.resize(n);
  kernels::norm3_batch(x, y, z, f.speed);

  f.curvature.resize(n);
  f.torsion.resize(n);
  f.torsion_defined.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3 cross = d.first[i].cross(d.second[i]);
    const double v = f.speed[i];
    const double v3 = v * v * v;
    f.curvature[i] = v > 0.0 ? cross.norm() / v3 : kNaN;
    const double cross2 = cross.squaredNorm();
    if (v > 0.0 && cross2 >= 1e-10 * v3 * v3) {
      f.torsion[i] = cross.dot(d.third[i]) / cross2;
      f.torsion_defined[i] = 1;
    } else {
      f.torsion[i] = kNaN;
      f.torsion_defined[i] = 0;
      ++f.undefined_torsion;
    }
  }

  f.arclength.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    f.arclength[i] =
        f.arclength[i - 1] + 0.5 * (c.times[i] - c.times[i - 1]) * (f.speed[i] + f.speed[i - 1]);
  }
  return f;
}

double circulation(const Curve3D& c) {
  c.validate(5);
  const double gap = (c.points.back() - c.points.front()).norm();
  if (gap > 1e-8) {
    throw Error(ErrorCode::NotClosed, "curve endpoints differ by " + std::to_string(gap));
  }
  const CurveDerivatives d = differentiate(c);
  double sum = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    sum += 0.5 * (c.times[i] - c.times[i - 1]) *
           (d.first[i].squaredNorm() + d.first[i - 1].squaredNorm());
  }
  return sum;
}

std::optional<ClosurePeriod> closure_period(const dynamics::FieldParams& p, double h) {
  if (!p.resonant() || p.k.k() != 0.0 || !(h > 0.0)) return std::nullopt;
  constexpr long kMaxIndex = 10000;
  constexpr double kTolerance = 1e-9;
  const double x = 2.0 * p.omega / h;  // = l / m
  // Convergents l_n / m_n of the continued fraction of x.
  long l_prev = 1, m_prev = 0;
  long l_cur = static_cast<long>(std::floor(x)), m_cur = 1;
  double rest = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (m_cur > kMaxIndex || l_cur > kMaxIndex) break;
    if (l_cur > 0 && std::abs(x - static_cast<double>(l_cur) / m_cur) <= kTolerance * std::max(1.0, x)) {
      return ClosurePeriod{2.0 * std::numbers::pi * m_cur / h, m_cur, l_cur};
    }
    if (rest < 1e-15) break;
    const double inv = 1.0 / rest;
    const long a = static_cast<long>(std::floor(inv));
    rest = inv - a;
    const long l_next = a * l_cur + l_prev;
    const long m_next = a * m_cur + m_prev;
    l_prev = l_cur;
    m_prev = m_cur;
    l_cur = l_next;
    m_cur = m_next;
  }
  return std::nullopt;
}

std::vector<std::size_t> sign_change_indices(std::span<const double> values) {
  std::vector<std::size_t> out;
  int previous = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!is_valid(values[i])) continue;
    const int s = sign_of(values[i]);
    if (s == 0) continue;
    if (previous != 0 && s != previous) out.push_back(i);
    previous = s;
  }
  return out;
}

namespace {

template <class Compare>
std::vector<std::size_t> strict_local(std::span<const double> v, Compare better) {
  std::vector<std::size_t> out;
  std::vector<std::size_t> valid;
  valid.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (is_valid(v[i])) valid.push_back(i);
  }
  for (std::size_t j = 1; j + 1 < valid.size(); ++j) {
    const double left = v[valid[j - 1]];
    const double mid = v[valid[j]];
    const double right = v[valid[j + 1]];
    // Plateaus count once, at their first sample.
    if (better(mid, left) && !better(right, mid) && !(right == mid && j + 2 < valid.size() &&
                                                     better(v[valid[j + 2]], mid))) {
      out.push_back(valid[j]);
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> local_minimum_indices(std::span<const double> values) {
  return strict_local(values, [](double a, double b) { return a < b; });
}

std::vector<std::size_t> local_maximum_indices(std::span<const double> values) {
  return strict_local(values, [](double a, double b) { return a > b; });
}

std::vector<std::size_t> local_extremum_indices(std::span<const double> values) {
  std::vector<std::size_t> out = local_minimum_indices(values);
  const std::vector<std::size_t> maxima = local_maximum_indices(values);
  out.insert(out.end(), maxima.begin(), maxima.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool events_aligned(std::span<const std::size_t> events, std::span<const std::size_t> partners,
                    std::size_t window) {
  for (std::size_t e : events) {
    const bool found = std::any_of(partners.begin(), partners.end(), [&](std::size_t p) {
      return (e > p ? e - p : p - e) <= window;
    });
    if (!found) return false;
  }
  return true;
}

}  // namespace qslspin::geometry
