#include "qslspin/qsl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qslspin/errors.hpp"
#include "qslspin/geometry.hpp"
#include "qslspin/kernels.hpp"
#include "qslspin/quadrature.hpp"

namespace qslspin::qsl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCoverageSlack = 1e-12;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be positive and finite");
  }
}

bool covers(const EnergyStats& stats, double tau) {
  return !stats.times.empty() && stats.times.front() <= kCoverageSlack &&
         stats.times.back() >= tau - kCoverageSlack * std::max(1.0, tau);
}

}  // namespace

double energy_variance(const spin::QuantumState& rho, const ComplexMatrix& hamiltonian) {
  if (hamiltonian.rows() != rho.dimension() || hamiltonian.cols() != rho.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian and state dimensions differ");
  }
  const double mean = rho.expectation(hamiltonian);
  const double second = rho.expectation(hamiltonian * hamiltonian);
  return std::max(0.0, second - mean * mean);
}

EnergyStats energy_stats(const dynamics::Trajectory& traj) {
  EnergyStats stats;
  stats.times = traj.times;
  const std::vector<Vector3> fields = dynamics::field_on_grid(traj.times, traj.field);
  stats.variance.resize(traj.size());
  stats.std_dev.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ComplexMatrix h = dynamics::hamiltonian_from_field(fields[i], traj.system);
    stats.variance[i] = energy_variance(traj.states[i], h);
    stats.std_dev[i] = std::sqrt(stats.variance[i]);
  }
  return stats;
}

double time_averaged_std_dev(const EnergyStats& stats, double tau) {
  require_positive(tau, "averaging time");
  if (!covers(stats, tau)) {
    throw Error(ErrorCode::InsufficientCoverage, "energy samples do not cover [0, tau]");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < stats.times.size(); ++i) {
    const double t0 = stats.times[i - 1];
    const double t1 = stats.times[i];
    if (t0 >= tau) break;
    const double y0 = stats.std_dev[i - 1];
    double y1 = stats.std_dev[i];
    double end = t1;
    if (t1 > tau) {
      y1 = y0 + (y1 - y0) * (tau - t0) / (t1 - t0);
      end = tau;
    }
    sum += 0.5 * (end - t0) * (y0 + y1);
  }
  return sum / tau;
}

HodographLength hodograph_length(const dynamics::Trajectory& traj, double p) {
  if (traj.size() < 5) {
    throw Error(ErrorCode::InvalidGrid, "hodograph length needs at least 5 samples");
  }
  if (traj.states.front().purity() < 1.0 - 1e-10) {
    throw Error(ErrorCode::NotPureState, "hodograph length requires a pure initial state");
  }
  require_positive(p, "speed normalization");
  const EnergyStats stats = energy_stats(traj);
  const geometry::FrenetData frenet = geometry::frenet_analyze(geometry::hodograph(traj));
  HodographLength out;
  out.s = 2.0 * std::sqrt(p) * quadrature::trapezoid(stats.times, stats.std_dev);
  out.l = frenet.arclength.back();
  return out;
}

double p_factor(Spin s) noexcept { return 3.0 / (2.0 * (s.value() + 1.0)); }

double geodesic_p(Spin s, double r_b) {
  require_positive(r_b, "Bloch radius");
  return 3.0 * r_b * r_b / (4.0 * s.casimir());
}

double pole_distance(double h, double H, elliptic::EllipticModulus k, Spin s) {
  require_positive(h, "transverse amplitude h");
  if (!(H >= 0.0) || !std::isfinite(H)) {
    throw Error(ErrorCode::InvalidParameter, "longitudinal amplitude H must be nonnegative");
  }
  if (!(s.twice() <= 2 || k.k() == 0.0)) {
    throw Error(ErrorCode::NotApplicable,
                "pole-to-pole distance needs the resonance closed form (S <= 1 or k = 0)");
  }
  const auto table = kernels::make_landen_table(k.k());
  const kernels::Isa isa = kernels::active_isa();
  const quadrature::BatchIntegrand integrand = [&](std::span<const double> t,
                                                   std::span<double> out) {
    const std::size_t n = t.size();
    std::vector<double> u(n), sn(n), cn(n), dn(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = H * t[i];
    kernels::sncndn_batch(isa, u, table, sn, cn, dn);
    for (std::size_t i = 0; i < n; ++i) {
      const double transverse = H * std::sin(h * t[i]) * dn[i];
      out[i] = std::sqrt(h * h + transverse * transverse);
    }
  };
  const quadrature::Result r = quadrature::gauss_kronrod(integrand, 0.0, kPi / h, 1e-13, 1e-13);
  return bloch_radius(s) * r.value;
}

double tau_qsl(Spin s, double h, double H) {
  require_positive(h, "transverse amplitude h");
  const double e = elliptic::incomplete_E(kPi / 2.0, elliptic::EllipticParameter(-(H * H) / (h * h)));
  return kPi * kPi * std::sqrt(s.value()) / (std::numbers::sqrt2 * h * e);
}

double tau_qsl_limit(Spin s, double H) {
  require_positive(H, "longitudinal amplitude H");
  return kPi * kPi * std::sqrt(s.value()) / (std::numbers::sqrt2 * H);
}

double tau1_qsl(Spin s, double h, double H) {
  require_positive(h, "transverse amplitude h");
  const double two_s = static_cast<double>(s.twice());
  const double e =
      elliptic::incomplete_E(kPi / two_s, elliptic::EllipticParameter(-(H * H) / (h * h)));
  return kPi * kPi / (h * std::pow(two_s, 1.5) * e);
}

long nearest_integer(double x) { return std::lround(std::nearbyint(x)); }

namespace {

// (-1)^r (1 - |cos(pi/(2S))|) + 2r, which equals int_0^{pi/(2S)} |sin v| dv.
double limit_bracket(long twice_s) {
  const double x = 1.0 / static_cast<double>(twice_s);
  const long r = nearest_integer(x);
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  // 1 - |cos a| = 2 sin^2(a/2) for a <= pi/2, free of cancellation at large S.
  const double a = kPi * x;
  const double one_minus_cos =
      a <= 0.5 * kPi ? 2.0 * std::sin(0.5 * a) * std::sin(0.5 * a) : 1.0 - std::abs(std::cos(a));
  return sign * one_minus_cos + 2.0 * static_cast<double>(r);
}

}  // namespace

double tau1_qsl_limit(Spin s, double H) {
  require_positive(H, "longitudinal amplitude H");
  const double two_s = static_cast<double>(s.twice());
  return kPi * kPi / (H * std::pow(two_s, 1.5) * limit_bracket(s.twice()));
}

double ratio_limit(Spin s) { return ratio_limit(s.value()); }

double ratio_limit(double s) {
  const double twice = 2.0 * s;
  if (!(twice >= 1.0) || !std::isfinite(twice) || twice != std::round(twice)) {
    throw Error(ErrorCode::InvalidSpin, "ratio limit needs a half-integer S >= 1/2");
  }
  // tau_qsl_limit / tau1_qsl_limit with H cancelled.
  const double tau = std::sqrt(s) / std::numbers::sqrt2;
  const double tau1 = 1.0 / (std::pow(twice, 1.5) * limit_bracket(std::lround(twice)));
  return tau / tau1;
}

QslReport mt_check(const dynamics::Trajectory& traj, Spin s, double tau, BoundKind which) {
  if (!(traj.system.spin() == s)) {
    throw Error(ErrorCode::DimensionMismatch, "spin differs from the trajectory's spin system");
  }
  require_positive(tau, "interval length");
  const EnergyStats stats = energy_stats(traj);
  if (!covers(stats, tau)) {
    throw Error(ErrorCode::InsufficientCoverage, "trajectory does not cover [0, tau]");
  }
  const dynamics::FieldParams& p = traj.field;
  QslReport rep;
  rep.spin = s;
  rep.h = p.h();
  rep.H = p.H;
  rep.which = which;
  rep.p_factor = p_factor(s);
  rep.tau = kPi / rep.h;
  rep.tau1 = kPi / (s.twice() * rep.h);
  rep.tau_qsl = tau_qsl(s, rep.h, rep.H);
  rep.tau1_qsl = tau1_qsl(s, rep.h, rep.H);
  rep.tau_margin = rep.tau - rep.tau_qsl;
  rep.tau1_margin = rep.tau1 - rep.tau1_qsl;
  rep.averaged_std_dev = time_averaged_std_dev(stats, tau);

  const double sv = s.value();
  const double full_bound = std::sqrt(sv / 2.0) * kPi;
  const double first_bound = kPi / (2.0 * std::sqrt(2.0 * sv));
  auto margin_at = [&](double t, double bound) {
    return covers(stats, t) ? time_averaged_std_dev(stats, t) * t - bound : kNaN;
  };
  if (which == BoundKind::Full) {
    rep.mt_margin = rep.averaged_std_dev * tau - full_bound;
    rep.mt1_margin = margin_at(rep.tau1, first_bound);
  } else {
    rep.mt1_margin = rep.averaged_std_dev * tau - first_bound;
    rep.mt_margin = margin_at(rep.tau, full_bound);
  }

  rep.enforced = dynamics::analytic_resonance_applicable(p, s) &&
                 traj.states.front().purity() >= 1.0 - 1e-10;
  const double checked = which == BoundKind::Full ? rep.mt_margin : rep.mt1_margin;
  rep.satisfied = checked >= -kMarginSlack;
  return rep;
}

spin::CoherenceVector geodesic_model(Spin, double eta, double r_b, double t) {
  require_positive(eta, "precession rate eta");
  require_positive(r_b, "Bloch radius");
  return {Vector3(r_b * std::cos(eta * t), r_b * std::sin(eta * t), 0.0), r_b};
}

}  // namespace qslspin::qsl
