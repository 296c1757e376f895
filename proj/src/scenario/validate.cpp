#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "qslspin/dynamics.hpp"
#include "qslspin/elliptic.hpp"
#include "qslspin/errors.hpp"
#include "qslspin/geometry.hpp"
#include "qslspin/kernels.hpp"
#include "qslspin/qsl.hpp"
#include "qslspin/quadrature.hpp"
#include "qslspin/scenario.hpp"
#include "qslspin/uncertainty.hpp"

namespace qslspin::scenario {

namespace {

constexpr double kPi = std::numbers::pi;

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

  void at_most(const std::string& name, double value, double tolerance, std::string detail = {}) {
    const CheckStatus status = value <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    out_.push_back({suite_, name, status, value, tolerance, std::move(detail)});
  }
  void holds(const std::string& name, bool ok, std::string detail = {}) {
    out_.push_back({suite_, name, ok ? CheckStatus::Pass : CheckStatus::Fail, ok ? 1.0 : 0.0, 1.0,
                    std::move(detail)});
  }
  void not_applicable(const std::string& name, double value, std::string detail) {
    out_.push_back({suite_, name, CheckStatus::NotApplicable, value, 0.0, std::move(detail)});
  }

  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string suite_;
  std::vector<CheckResult> out_;
};

std::string number_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string spin_label(double s, double k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "S=%g,k=%g", s, k);
  return buf;
}

void special_functions(Recorder& rec) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u_dist(-50.0, 50.0);
  std::uniform_real_distribution<double> k_dist(0.0, 1.0);

  double pythagoras = 0.0, modulus = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = u_dist(rng);
    const elliptic::EllipticModulus k(k_dist(rng));
    const auto f = elliptic::jacobi_sncndn(u, k);
    pythagoras = std::max(pythagoras, std::abs(f.sn * f.sn + f.cn * f.cn - 1.0));
    modulus = std::max(modulus, std::abs(f.dn * f.dn + k.m() * f.sn * f.sn - 1.0));
  }
  rec.at_most("sn^2+cn^2=1", pythagoras, 1e-12);
  rec.at_most("dn^2+k^2sn^2=1", modulus, 1e-12);

  double period = 0.0, quarter = 0.0;
  std::uniform_real_distribution<double> small_u(-10.0, 10.0);
  std::uniform_real_distribution<double> k_moderate(0.0, 0.99);
  for (int i = 0; i < 2000; ++i) {
    const elliptic::EllipticModulus k(k_moderate(rng));
    const double big_k = elliptic::complete_K(k);
    const double u = small_u(rng);
    const auto a = elliptic::jacobi_sncndn(u, k);
    const auto b = elliptic::jacobi_sncndn(u + 4.0 * big_k, k);
    period = std::max({period, std::abs(a.sn - b.sn), std::abs(a.cn - b.cn), std::abs(a.dn - b.dn)});
    const auto q = elliptic::jacobi_sncndn(big_k, k);
    quarter = std::max({quarter, std::abs(q.sn - 1.0), std::abs(q.cn)});
  }
  rec.at_most("period 4K", period, 1e-12);
  rec.at_most("sn(K)=1,cn(K)=0", quarter, 1e-12);

  // Second-kind integral against direct adaptive quadrature.
  std::uniform_real_distribution<double> m_dist(-10.0, 1.0);
  std::uniform_real_distribution<double> phi_dist(-5.0, 5.0);
  double e_err = 0.0, e_period = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double m = m_dist(rng);
    const double phi = phi_dist(rng);
    const elliptic::EllipticParameter par(m);
    const auto q = quadrature::gauss_kronrod(
        [m](double v) { return std::sqrt(1.0 - m * std::sin(v) * std::sin(v)); }, 0.0, phi, 1e-15,
        1e-15);
    const double e = elliptic::incomplete_E(phi, par);
    e_err = std::max(e_err, std::abs(e - q.value) / std::max(1.0, std::abs(q.value)));
    const double shift = elliptic::incomplete_E(phi + kPi, par) - e - 2.0 * elliptic::complete_E(par);
    e_period = std::max(e_period, std::abs(shift) / std::max(1.0, std::abs(e)));
  }
  rec.at_most("E(phi|m) vs quadrature", e_err, 1e-12);
  rec.at_most("E(phi+pi)=E(phi)+2E", e_period, 1e-12);

  double k_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const elliptic::EllipticModulus k(k_moderate(rng));
    const double m = k.m();
    const auto q = quadrature::gauss_kronrod(
        [m](double v) { return 1.0 / std::sqrt(1.0 - m * std::sin(v) * std::sin(v)); }, 0.0,
        kPi / 2.0, 1e-15, 1e-15);
    k_err = std::max(k_err, std::abs(elliptic::complete_K(k) - q.value) / q.value);
  }
  rec.at_most("K(k) vs quadrature", k_err, 1e-12);

  if (kernels::isa_available(kernels::Isa::Avx2)) {
    std::vector<double> u(4099), sn0(u.size()), cn0(u.size()), dn0(u.size());
    std::vector<double> sn1(u.size()), cn1(u.size()), dn1(u.size());
    double diff = 0.0;
    for (double kv : {0.0, 0.3, 0.7, 0.95, 1.0}) {
      for (auto& x : u) x = u_dist(rng);
      const auto table = kernels::make_landen_table(kv);
      kernels::sncndn_batch(kernels::Isa::Scalar, u, table, sn0, cn0, dn0);
      kernels::sncndn_batch(kernels::Isa::Avx2, u, table, sn1, cn1, dn1);
      for (std::size_t i = 0; i < u.size(); ++i) {
        diff = std::max({diff, std::abs(sn0[i] - sn1[i]), std::abs(cn0[i] - cn1[i]),
                         std::abs(dn0[i] - dn1[i])});
      }
    }
    rec.at_most("avx2 sn/cn/dn vs scalar", diff, 1e-13);
  } else {
    rec.not_applicable("avx2 sn/cn/dn vs scalar", 0.0, "AVX2 kernels unavailable on this CPU");
  }
}

void dynamics_suite(Recorder& rec) {
  for (int twice : {1, 2}) {
    for (double k : {0.0, 0.5, 0.9}) {
      const spin::SpinSystem sys(Spin::from_twice(twice));
      const auto p = dynamics::FieldParams::consistent_field(2.0, 1.0, 1.0, k);
      const auto traj = dynamics::propagate_numeric(spin::QuantumState::highest_weight(sys), p, sys,
                                                    2.0 * kPi, 40000, 40);
      double err = 0.0;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        err = std::max(err,
                       (traj.coherence[i].r - dynamics::analytic_resonance_spin(traj.times[i], p, sys).r).norm());
      }
      rec.at_most("numeric vs closed form " + spin_label(0.5 * twice, k), err, 1e-7);
    }
  }

  const auto probe = geometry::uniform_grid(0.0, 10.0, 200);
  auto validity = [&](int twice, double k) {
    const spin::SpinSystem sys(Spin::from_twice(twice));
    const auto p = dynamics::FieldParams::consistent_field(2.0, 1.0, 1.0, k);
    return dynamics::AlphaPropagator(p, sys, probe).validity();
  };
  rec.holds("alpha exact S=1,k=0.5", validity(2, 0.5) == dynamics::AlphaValidity::Exact);
  rec.holds("alpha exact S=2,k=0", validity(4, 0.0) == dynamics::AlphaValidity::Exact);
  rec.holds("alpha not applicable S=3/2,k=0.7",
            validity(3, 0.7) == dynamics::AlphaValidity::NotApplicable);

  const spin::SpinSystem sys(Spin::from_twice(2));
  const auto p = dynamics::FieldParams::consistent_field(2.0, 1.0, 1.0, 0.5);
  const dynamics::AlphaPropagator alpha(p, sys, probe);
  const auto times = geometry::uniform_grid(0.0, 2.0 * kPi, 500);
  const auto traj = alpha.evolve(spin::QuantumState::highest_weight(sys), times);
  double err = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    err = std::max(err, (traj.coherence[i].r - dynamics::analytic_resonance_spin(times[i], p, sys).r).norm());
  }
  rec.at_most("alpha propagator vs closed form S=1,k=0.5", err, 1e-10);
}

// Sum rule and covariance spectrum along the resonance trajectory from |S,S>.
std::pair<double, double> conservation_deviation(double s, double k) {
  const spin::SpinSystem sys(Spin::from_value(s));
  const auto p = dynamics::FieldParams::consistent_field(2.0, 1.0, 1.0, k);
  const auto rho0 = spin::QuantumState::highest_weight(sys);
  const double t_end = 2.0 * kPi;
  dynamics::Trajectory traj = [&] {
    if (k == 0.0) {
      const dynamics::AlphaPropagator alpha(p, sys, geometry::uniform_grid(0.0, t_end, 64));
      if (alpha.validity() == dynamics::AlphaValidity::Exact) {
        return alpha.evolve(rho0, geometry::uniform_grid(0.0, t_end, 999));
      }
    }
    return dynamics::propagate_numeric(rho0, p, sys, t_end, 9990, 10);
  }();
  double sum_dev = 0.0, spectrum_dev = 0.0;
  for (const auto& state : traj.states) {
    const auto cov = uncertainty::covariance(state, sys);
    sum_dev = std::max(sum_dev, std::abs(cov.std_devs.squaredNorm() - s));
    spectrum_dev = std::max({spectrum_dev, std::abs(cov.eigenvalues(0) - s / 2.0),
                             std::abs(cov.eigenvalues(1) - s / 2.0), std::abs(cov.eigenvalues(2))});
  }
  return {sum_dev, spectrum_dev};
}

void conservation_suite(Recorder& rec, const ValidationOptions& opt) {
  std::vector<std::pair<double, double>> cases;
  if (opt.spin && opt.k) {
    cases.push_back({*opt.spin, *opt.k});
  } else if (opt.spin) {
    cases = {{*opt.spin, 0.0}, {*opt.spin, 0.5}};
  } else if (opt.k) {
    for (double s : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) cases.push_back({s, *opt.k});
  } else {
    for (double s : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) cases.push_back({s, 0.0});
    cases.insert(cases.end(), {{0.5, 0.5}, {1.0, 0.5}, {3.0, 0.5}});
  }
  for (const auto& [s, k] : cases) {
    const auto [sum_dev, spectrum_dev] = conservation_deviation(s, k);
    const std::string label = spin_label(s, k);
    if (!dynamics::analytic_resonance_applicable(dynamics::FieldParams::consistent_field(2, 1, 1, k),
                                                 Spin::from_value(s))) {
      rec.not_applicable("sum of variances " + label, sum_dev,
                         "sum rule stated only for S <= 1 when k != 0");
      continue;
    }
    rec.at_most("sum of variances " + label, sum_dev, 1e-9);
    rec.at_most("covariance spectrum " + label, spectrum_dev, 1e-9);
  }
}

void qsl_suite(Recorder& rec) {
  const std::pair<double, double> table[] = {{0.5, 1.0}, {1.0, 2.0}, {1.5, 2.25}, {2.0, 2.343}};
  for (const auto& [s, expected] : table) {
    rec.at_most("ratio limit S=" + number_label(s), std::abs(qsl::ratio_limit(s) - expected), 1e-3);
  }
  rec.at_most("ratio limit S=50 vs pi^2/4", std::abs(qsl::ratio_limit(50.0) - kPi * kPi / 4.0), 1e-3);

  for (int twice : {1, 2, 4}) {
    const Spin s = Spin::from_twice(twice);
    const double h = 1e-6;
    rec.at_most("tau_qsl h->0 S=" + number_label(s.value()),
                std::abs(qsl::tau_qsl(s, h, 1.0) / qsl::tau_qsl_limit(s, 1.0) - 1.0), 1e-9);
    rec.at_most("tau1_qsl h->0 S=" + number_label(s.value()),
                std::abs(qsl::tau1_qsl(s, h, 1.0) / qsl::tau1_qsl_limit(s, 1.0) - 1.0), 1e-9);
  }

  const Spin qutrit = Spin::from_twice(2);
  std::vector<double> errs;
  for (double ratio : {10.0, 100.0, 1000.0}) {
    errs.push_back(qsl::pole_distance(ratio, 1.0, elliptic::EllipticModulus(0.5), qutrit) /
                       bloch_radius(qutrit) -
                   kPi);
  }
  rec.at_most("pole distance h/H=100", errs[1], 8e-5);
  const double slope = (std::log(errs[2]) - std::log(errs[0])) / (std::log(1000.0) - std::log(10.0));
  rec.at_most("pole distance error slope", std::abs(slope + 2.0), 0.1);

  for (int twice : {1, 2, 4}) {
    const spin::SpinSystem sys(Spin::from_twice(twice));
    const auto p = dynamics::FieldParams::consistent_field(2.0, 1.0, 1.0, 0.0);
    const auto traj = dynamics::propagate_numeric(spin::QuantumState::highest_weight(sys), p, sys,
                                                  kPi / 2.0, 20000);
    const auto r = qsl::mt_check(traj, sys.spin(), kPi / 2.0, qsl::BoundKind::Full);
    const std::string label = spin_label(sys.spin().value(), 0.0);
    rec.at_most("MT margin " + label, -r.mt_margin, 1e-9);
    rec.at_most("MT first-orthogonal margin " + label, -r.mt1_margin, 1e-9);

    const auto grid = geometry::uniform_grid(0.0, kPi, 4000);
    const double c = geometry::circulation(geometry::analytic_hodograph(grid, p, sys));
    const double sv = sys.spin().value();
    const double expected = 3.0 * kPi * sv / (sv + 1.0) * (2.0 * 2.0 + 1.0 / 2.0);
    rec.at_most("circulation " + label, std::abs(c / expected - 1.0), 1e-6);
  }
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) noexcept {
  if (name == "special_functions") return Suite::SpecialFunctions;
  if (name == "dynamics") return Suite::Dynamics;
  if (name == "conservation") return Suite::Conservation;
  if (name == "qsl") return Suite::Qsl;
  if (name == "all") return Suite::All;
  return std::nullopt;
}

std::string_view to_string(Suite s) noexcept {
  switch (s) {
    case Suite::SpecialFunctions:
      return "special_functions";
    case Suite::Dynamics:
      return "dynamics";
    case Suite::Conservation:
      return "conservation";
    case Suite::Qsl:
      return "qsl";
    case Suite::All:
      return "all";
  }
  return "unknown";
}

std::string_view to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::NotApplicable:
      return "not_applicable";
  }
  return "unknown";
}

bool ValidationReport::ok() const noexcept {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json doc;
  doc["ok"] = ok();
  doc["checks"] = nlohmann::json::array();
  std::size_t pass = 0, fail = 0, na = 0;
  for (const auto& c : checks) {
    nlohmann::json j{{"suite", c.suite},
                     {"name", c.name},
                     {"status", std::string(to_string(c.status))},
                     {"value", c.value},
                     {"tolerance", c.tolerance}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    doc["checks"].push_back(j);
    pass += c.status == CheckStatus::Pass;
    fail += c.status == CheckStatus::Fail;
    na += c.status == CheckStatus::NotApplicable;
  }
  doc["summary"] = {{"pass", pass}, {"fail", fail}, {"not_applicable", na}};
  return doc;
}

ValidationReport validate(Suite suite, const ValidationOptions& options) {
  ValidationReport report;
  auto run = [&](Suite s, auto&& body) {
    if (suite != s && suite != Suite::All) return;
    Recorder rec{std::string(to_string(s))};
    try {
      body(rec);
    } catch (const Error& e) {
      rec.holds("suite completed", false, e.what());
    }
    auto checks = rec.take();
    report.checks.insert(report.checks.end(), checks.begin(), checks.end());
  };
  run(Suite::SpecialFunctions, [](Recorder& r) { special_functions(r); });
  run(Suite::Dynamics, [](Recorder& r) { dynamics_suite(r); });
  run(Suite::Conservation, [&](Recorder& r) { conservation_suite(r, options); });
  run(Suite::Qsl, [](Recorder& r) { qsl_suite(r); });
  return report;
}

}  // namespace qslspin::scenario
