#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "qslspin/dynamics.hpp"
#include "qslspin/errors.hpp"
#include "qslspin/geometry.hpp"
#include "qslspin/qsl.hpp"
#include "qslspin/scenario.hpp"
#include "qslspin/uncertainty.hpp"

namespace qslspin::scenario {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

// Lazily propagates the scenario's trajectory once for all outputs.
class Context {
 public:
  explicit Context(const ScenarioConfig& cfg)
      : cfg_(cfg),
        spin_(Spin::from_value(cfg.spin)),
        system_(spin_),
        field_(dynamics::FieldParams::make(cfg.h1, cfg.h2, cfg.H, cfg.omega, cfg.k)) {}

  const ScenarioConfig& config() const { return cfg_; }
  Spin spin() const { return spin_; }
  const spin::SpinSystem& system() const { return system_; }
  const dynamics::FieldParams& field() const { return field_; }

  const dynamics::Trajectory& trajectory() {
    if (!trajectory_) {
      const int steps = cfg_.n_steps.value_or(dynamics::default_step_count(field_, cfg_.t_end));
      trajectory_ = dynamics::propagate_numeric(spin::QuantumState::highest_weight(system_), field_,
                                                system_, cfg_.t_end, steps, cfg_.record_every);
    }
    return *trajectory_;
  }

 private:
  ScenarioConfig cfg_;
  Spin spin_;
  spin::SpinSystem system_;
  dynamics::FieldParams field_;
  std::optional<dynamics::Trajectory> trajectory_;
};

Table trajectory_table(Context& ctx) {
  const auto& traj = ctx.trajectory();
  Table t{{"t[1/omega]", "S1", "S2", "S3", "R1", "R2", "R3", "purity"}, {}};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector3 s = spin::spin_expectations(traj.states[i], traj.system);
    const Vector3& r = traj.coherence[i].r;
    t.rows.push_back({traj.times[i], s(0), s(1), s(2), r(0), r(1), r(2), traj.states[i].purity()});
  }
  return t;
}

Table hodograph_table(Context& ctx) {
  const auto& traj = ctx.trajectory();
  Table t{{"t[1/omega]", "R1", "R2", "R3", "theta[rad]", "phi[rad]"}, {}};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector3& r = traj.coherence[i].r;
    double theta = kNaN, phi = kNaN;
    if (r.norm() > 1e-12) {
      const auto a = geometry::to_spherical(r);
      theta = a.theta;
      phi = a.phi;
    }
    t.rows.push_back({traj.times[i], r(0), r(1), r(2), theta, phi});
  }
  return t;
}

Table frenet_table(Context& ctx) {
  const auto& traj = ctx.trajectory();
  const geometry::FrenetData f = geometry::frenet_analyze(geometry::hodograph(traj));
  Table t{{"t[1/omega]", "S3", "V[1/omega]", "curvature", "torsion", "arclength", "torsion_defined"},
          {}};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double s3 = traj.states[i].expectation(traj.system.c3());
    t.rows.push_back({f.times[i], s3, f.speed[i], f.curvature[i], f.torsion[i], f.arclength[i],
                      static_cast<double>(f.torsion_defined[i])});
  }
  return t;
}

Table deviation_table(Context& ctx) {
  const auto& traj = ctx.trajectory();
  const uncertainty::DeviationCurve d = uncertainty::deviation_curve(traj);
  const bool closed_form = ctx.field().consistent() && ctx.field().resonant() && ctx.field().k.k() == 0.0;
  Table t{{"t[1/omega]", "dS1", "dS2", "dS3", "sum_sq", "sum_sq_minus_S", "dS1_closed", "dS2_closed",
           "dS3_closed"},
          {}};
  const double s = ctx.spin().value();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector3& p = d.curve.points[i];
    Vector3 c = Vector3::Constant(kNaN);
    if (closed_form) c = uncertainty::deviation_closed_form(traj.times[i], ctx.field(), ctx.spin());
    const double sum = p.squaredNorm();
    t.rows.push_back({traj.times[i], p(0), p(1), p(2), sum, sum - s, c(0), c(1), c(2)});
  }
  return t;
}

Table qsl_table(Context& ctx) {
  const auto& field = ctx.field();
  if (!field.consistent()) {
    throw Error(ErrorCode::NotApplicable, "speed-limit report needs h1 = h2");
  }
  if (!(field.h() > 0.0)) {
    throw Error(ErrorCode::NotApplicable, "speed-limit report needs h > 0");
  }
  const double tau = kPi / field.h();
  const qsl::QslReport r = qsl::mt_check(ctx.trajectory(), ctx.spin(), tau, qsl::BoundKind::Full);
  double pole = kNaN;
  if (field.resonant() && dynamics::analytic_resonance_applicable(field, ctx.spin())) {
    pole = qsl::pole_distance(field.h(), field.H, field.k, ctx.spin());
  }
  Table t{{"S", "h[omega]", "H[omega]", "k", "tau[1/omega]", "tau1[1/omega]", "tau_qsl[1/omega]",
           "tau1_qsl[1/omega]", "tau_margin", "tau1_margin", "mt_margin", "mt1_margin", "p_factor",
           "avg_std_dev_E[omega]", "pole_distance", "pole_distance_over_rB", "enforced", "satisfied"},
          {}};
  t.rows.push_back({ctx.spin().value(), r.h, r.H, field.k.k(), r.tau, r.tau1, r.tau_qsl, r.tau1_qsl,
                    r.tau_margin, r.tau1_margin, r.mt_margin, r.mt1_margin, r.p_factor,
                    r.averaged_std_dev, pole, pole / ctx.system().bloch_radius(),
                    r.enforced ? 1.0 : 0.0, r.satisfied ? 1.0 : 0.0});
  return t;
}

Table uncertainty_table(Context& ctx) {
  const auto& traj = ctx.trajectory();
  Table t{{"t[1/omega]", "S3", "dS1", "dS2", "dS3", "lambda1", "lambda2", "lambda3", "HM12", "GM12",
           "AM12", "HM123", "GM123", "AM123", "M12", "D1_given_2", "Var1_given_2"},
          {}};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& state = traj.states[i];
    const auto cov = uncertainty::covariance(state, traj.system);
    const auto m = uncertainty::conditional_measures(state, traj.system);
    const double pair[2] = {cov.std_devs(0), cov.std_devs(1)};
    const double triple[3] = {cov.std_devs(0), cov.std_devs(1), cov.std_devs(2)};
    const auto b2 = uncertainty::product_bounds(pair);
    const auto b3 = uncertainty::product_bounds(triple);
    t.rows.push_back({traj.times[i], state.expectation(traj.system.c3()), cov.std_devs(0),
                      cov.std_devs(1), cov.std_devs(2), cov.eigenvalues(0), cov.eigenvalues(1),
                      cov.eigenvalues(2), b2.harmonic, b2.geometric, b2.arithmetic, b3.harmonic,
                      b3.geometric, b3.arithmetic, m.mutual(0, 1), m.conditional(0, 1),
                      m.conditional_variance(0, 1)});
  }
  return t;
}

Table bounds_table(const ScenarioConfig& cfg) {
  Table t{{"S", "h[omega]", "H[omega]", "tau[1/omega]", "tau_qsl[1/omega]", "tau1[1/omega]",
           "tau1_qsl[1/omega]", "tau_qsl_limit[1/omega]", "tau1_qsl_limit[1/omega]"},
          {}};
  for (double sv : cfg.tables.spins) {
    const Spin s = Spin::from_value(sv);
    const double lim = cfg.H > 0.0 ? qsl::tau_qsl_limit(s, cfg.H) : kNaN;
    const double lim1 = cfg.H > 0.0 ? qsl::tau1_qsl_limit(s, cfg.H) : kNaN;
    for (double h : cfg.tables.h_values) {
      t.rows.push_back({sv, h, cfg.H, kPi / h, qsl::tau_qsl(s, h, cfg.H), kPi / (s.twice() * h),
                        qsl::tau1_qsl(s, h, cfg.H), lim, lim1});
    }
  }
  return t;
}

Table ratio_table(const ScenarioConfig& cfg) {
  Table t{{"S", "ratio_limit"}, {}};
  for (double sv : cfg.tables.spins) t.rows.push_back({sv, qsl::ratio_limit(Spin::from_value(sv))});
  return t;
}

Table build(Context& ctx, OutputKind kind) {
  switch (kind) {
    case OutputKind::Trajectory:
      return trajectory_table(ctx);
    case OutputKind::Hodograph:
      return hodograph_table(ctx);
    case OutputKind::Frenet:
      return frenet_table(ctx);
    case OutputKind::DeviationCurve:
      return deviation_table(ctx);
    case OutputKind::QslReport:
      return qsl_table(ctx);
    case OutputKind::UncertaintyReport:
      return uncertainty_table(ctx);
    case OutputKind::BoundsTable:
      return bounds_table(ctx.config());
    case OutputKind::RatioTable:
      return ratio_table(ctx.config());
  }
  throw Error(ErrorCode::ConfigError, "unhandled output kind");
}

bool is_regime_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotApplicable:
    case ErrorCode::InsufficientCoverage:
    case ErrorCode::NotClosed:
    case ErrorCode::NotPureState:
    case ErrorCode::DegenerateVector:
    case ErrorCode::DivergentInput:
      return true;
    default:
      return false;
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
}

}  // namespace

Table build_output(const ScenarioConfig& cfg, OutputKind kind) {
  Context ctx(cfg);
  return build(ctx, kind);
}

nlohmann::json ResultManifest::to_json() const {
  nlohmann::json doc;
  doc["scenario"] = scenario;
  doc["outputs"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j;
    j["output"] = std::string(scenario::to_string(e.kind));
    j["applicable"] = e.applicable;
    j["path"] = e.path;
    j["columns"] = e.columns;
    j["rows"] = e.rows;
    j["checksum_fnv1a64"] = e.checksum;
    if (!e.note.empty()) j["note"] = e.note;
    doc["outputs"].push_back(j);
  }
  return doc;
}

ResultManifest run_scenario(const ScenarioConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  Context ctx(cfg);
  ResultManifest manifest;
  manifest.scenario = cfg.name;
  manifest.out_dir = cfg.out_dir;
  for (OutputKind kind : cfg.outputs) {
    ManifestEntry entry;
    entry.kind = kind;
    try {
      const Table table = build(ctx, kind);
      const std::string bytes = cfg.format == Format::Csv ? to_csv(table) : to_json_text(table);
      entry.path = std::string(to_string(kind)) + "." + std::string(to_string(cfg.format));
      write_file(cfg.out_dir / entry.path, bytes);
      entry.columns = table.columns;
      entry.rows = table.rows.size();
      entry.checksum = hex64(fnv1a64(bytes));
      if (kind == OutputKind::DeviationCurve &&
          !dynamics::analytic_resonance_applicable(ctx.field(), ctx.spin())) {
        // The curve is still written; only the sum rule is out of scope.
        entry.applicable = false;
        entry.note = "sum rule sum dS_i^2 = S expected only at resonance with S <= 1 or k = 0";
      }
    } catch (const Error& e) {
      if (!is_regime_error(e.code())) throw;
      entry.applicable = false;
      entry.note = e.what();
    }
    manifest.entries.push_back(std::move(entry));
  }
  nlohmann::json doc = manifest.to_json();
  doc["config"] = to_json(cfg);
  write_file(cfg.out_dir / "manifest.json", doc.dump(2) + "\n");
  return manifest;
}

}  // namespace qslspin::scenario
