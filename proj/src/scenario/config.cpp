#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "qslspin/errors.hpp"
#include "qslspin/scenario.hpp"
#include "qslspin/spin_algebra.hpp"

namespace qslspin::scenario {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<OutputKind, std::string_view>, 8> kOutputNames{{
    {OutputKind::Trajectory, "trajectory"},
    {OutputKind::Hodograph, "hodograph"},
    {OutputKind::Frenet, "frenet"},
    {OutputKind::DeviationCurve, "deviation_curve"},
    {OutputKind::QslReport, "qsl_report"},
    {OutputKind::UncertaintyReport, "uncertainty_report"},
    {OutputKind::BoundsTable, "bounds_table"},
    {OutputKind::RatioTable, "ratio_table"},
}};

struct Preset {
  std::string_view name;
  std::string_view description;
  std::string_view body;
};

// Figure presets share the resonance drive w = H = 1, h = 2 for a spin 1
// unless stated otherwise.
constexpr std::array<Preset, 9> kPresets{{
    {"fig1", "spin deviations (dS1, dS2, dS3) over one closure period, S=1, w=H=1, h=2",
     R"({"name": "fig1", "spin": 1, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end_over_pi": 1, "n_steps": 20000, "record_every": 10,
         "outputs": ["deviation_curve", "hodograph"]})"},
    {"fig2", "S3, curvature, torsion and apex speed, S=1, w=H=1, h=2",
     R"({"name": "fig2", "spin": 1, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end_over_pi": 2, "n_steps": 40000, "record_every": 10,
         "outputs": ["trajectory", "frenet"]})"},
    {"fig3", "harmonic, geometric and arithmetic means of two and three deviations, S=1",
     R"({"name": "fig3", "spin": 1, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end_over_pi": 1, "n_steps": 20000, "record_every": 10,
         "outputs": ["uncertainty_report"]})"},
    {"fig4", "S3, M(S1:S2), D(S1|S2), Var(S1|S2), S=1, w=H=1, h=2",
     R"({"name": "fig4", "spin": 1, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end_over_pi": 1, "n_steps": 20000, "record_every": 10,
         "outputs": ["uncertainty_report"]})"},
    {"fig5", "S3, M(S1:S2), D(S1|S2), Var(S1|S2), S=1, w=H=20, h=2",
     R"({"name": "fig5", "spin": 1, "field": {"h": 2, "H": 20, "omega": 20, "k": 0},
         "t_end_over_pi": 1, "n_steps": 100000, "record_every": 20,
         "outputs": ["uncertainty_report"]})"},
    {"qsl_qubit", "speed-limit report for S=1/2, w=H=1, h=2",
     R"({"name": "qsl_qubit", "spin": 0.5, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end_over_pi": 0.5, "n_steps": 20000, "record_every": 1,
         "outputs": ["qsl_report"]})"},
    {"qsl_qutrit_k05", "speed-limit report for S=1, k=0.5, w=H=1, h=2",
     R"({"name": "qsl_qutrit_k05", "spin": 1, "field": {"h": 2, "H": 1, "omega": 1, "k": 0.5},
         "t_end_over_pi": 0.5, "n_steps": 20000, "record_every": 1,
         "outputs": ["qsl_report", "deviation_curve"]})"},
    {"bounds_table", "tau_QSL and tau1_QSL with their h -> 0 limits over S and h, H=1",
     R"({"name": "bounds_table", "spin": 0.5, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end": 1, "outputs": ["bounds_table"],
         "tables": {"spins": [0.5, 1, 1.5, 2, 5, 10], "h": [0.01, 0.1, 0.5, 1, 2, 10, 100]}})"},
    {"ratio_table", "lim tau_QSL / tau1_QSL for S = 1/2, 1, 3/2, 2",
     R"({"name": "ratio_table", "spin": 0.5, "field": {"h": 2, "H": 1, "omega": 1, "k": 0},
         "t_end": 1, "outputs": ["ratio_table"],
         "tables": {"spins": [0.5, 1, 1.5, 2]}})"},
}};

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + message);
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(path, "must be finite");
  return x;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) config_error(prefix + key, "unknown key");
  }
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) config_error(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) config_error(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

std::string_view to_string(OutputKind kind) noexcept {
  for (const auto& [k, name] : kOutputNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<OutputKind> parse_output_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kOutputNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Format f) noexcept { return f == Format::Csv ? "csv" : "json"; }

std::optional<Format> parse_format(std::string_view name) noexcept {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("<root>", "config must be a JSON object");
  reject_unknown(doc,
                 {"name", "spin", "field", "t_end", "t_end_over_pi", "n_steps", "record_every",
                  "outputs", "out_dir", "format", "tables"},
                 "");
  ScenarioConfig cfg;

  if (doc.contains("name")) {
    if (!doc["name"].is_string()) config_error("name", "expected a string");
    cfg.name = doc["name"].get<std::string>();
  }

  if (!doc.contains("spin")) config_error("spin", "required");
  cfg.spin = number_at(doc, "spin", "spin");
  try {
    (void)Spin::from_value(cfg.spin);
  } catch (const Error& e) {
    config_error("spin", e.what());
  }

  if (!doc.contains("field") || !doc["field"].is_object()) {
    config_error("field", "required object with h (or h1, h2), H, omega, k");
  }
  const json& field = doc["field"];
  reject_unknown(field, {"h", "h1", "h2", "H", "omega", "k"}, "field.");
  if (field.contains("h")) {
    if (field.contains("h1") || field.contains("h2")) {
      config_error("field.h", "give either h or h1/h2, not both");
    }
    cfg.h1 = cfg.h2 = number_at(field, "h", "field.h");
  } else {
    if (!field.contains("h1") || !field.contains("h2")) config_error("field.h1", "h1 and h2 required");
    cfg.h1 = number_at(field, "h1", "field.h1");
    cfg.h2 = number_at(field, "h2", "field.h2");
  }
  if (!field.contains("H")) config_error("field.H", "required");
  if (!field.contains("omega")) config_error("field.omega", "required");
  cfg.H = number_at(field, "H", "field.H");
  cfg.omega = number_at(field, "omega", "field.omega");
  cfg.k = field.contains("k") ? number_at(field, "k", "field.k") : 0.0;
  if (cfg.h1 < 0.0) config_error("field.h1", "must be nonnegative");
  if (cfg.h2 < 0.0) config_error("field.h2", "must be nonnegative");
  if (cfg.H < 0.0) config_error("field.H", "must be nonnegative");
  if (!(cfg.omega > 0.0)) config_error("field.omega", "must be positive");
  if (!(cfg.k >= 0.0 && cfg.k <= 1.0)) config_error("field.k", "must lie in [0, 1]");

  if (doc.contains("t_end") == doc.contains("t_end_over_pi")) {
    config_error("t_end", "give exactly one of t_end or t_end_over_pi");
  }
  cfg.t_end = doc.contains("t_end") ? number_at(doc, "t_end", "t_end")
                                    : std::numbers::pi * number_at(doc, "t_end_over_pi", "t_end_over_pi");
  if (!(cfg.t_end > 0.0)) config_error("t_end", "must be positive");

  if (doc.contains("n_steps")) {
    const json& n = doc["n_steps"];
    if (n.is_string() && n.get<std::string>() == "auto") {
      cfg.n_steps.reset();
    } else if (n.is_number_integer() && n.get<long long>() >= 1 && n.get<long long>() <= 100000000) {
      cfg.n_steps = n.get<int>();
    } else {
      config_error("n_steps", "expected \"auto\" or an integer in [1, 1e8]");
    }
  }

  if (doc.contains("record_every")) {
    const json& r = doc["record_every"];
    if (!r.is_number_integer() || r.get<long long>() < 1) {
      config_error("record_every", "expected a positive integer");
    }
    cfg.record_every = r.get<int>();
  }

  if (!doc.contains("outputs") || !doc["outputs"].is_array() || doc["outputs"].empty()) {
    config_error("outputs", "required nonempty array");
  }
  std::set<OutputKind> seen;
  for (std::size_t i = 0; i < doc["outputs"].size(); ++i) {
    const json& o = doc["outputs"][i];
    const std::string path = "outputs[" + std::to_string(i) + "]";
    if (!o.is_string()) config_error(path, "expected a string");
    const auto kind = parse_output_kind(o.get<std::string>());
    if (!kind) config_error(path, "unknown output '" + o.get<std::string>() + "'");
    if (seen.insert(*kind).second) cfg.outputs.push_back(*kind);
  }

  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string()) config_error("out_dir", "expected a string");
    cfg.out_dir = doc["out_dir"].get<std::string>();
  } else {
    cfg.out_dir = std::filesystem::path("out") / cfg.name;
  }

  if (doc.contains("format")) {
    const auto f = doc["format"].is_string() ? parse_format(doc["format"].get<std::string>())
                                             : std::nullopt;
    if (!f) config_error("format", "expected \"csv\" or \"json\"");
    cfg.format = *f;
  }

  if (doc.contains("tables")) {
    const json& t = doc["tables"];
    if (!t.is_object()) config_error("tables", "expected an object");
    reject_unknown(t, {"spins", "h"}, "tables.");
    if (t.contains("spins")) {
      cfg.tables.spins = number_list(t["spins"], "tables.spins");
      for (std::size_t i = 0; i < cfg.tables.spins.size(); ++i) {
        try {
          (void)Spin::from_value(cfg.tables.spins[i]);
        } catch (const Error& e) {
          config_error("tables.spins[" + std::to_string(i) + "]", e.what());
        }
      }
    }
    if (t.contains("h")) {
      cfg.tables.h_values = number_list(t["h"], "tables.h");
      for (std::size_t i = 0; i < cfg.tables.h_values.size(); ++i) {
        if (!(cfg.tables.h_values[i] > 0.0)) {
          config_error("tables.h[" + std::to_string(i) + "]", "must be positive");
        }
      }
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["spin"] = cfg.spin;
  doc["field"] = {{"h1", cfg.h1}, {"h2", cfg.h2}, {"H", cfg.H}, {"omega", cfg.omega}, {"k", cfg.k}};
  doc["t_end"] = cfg.t_end;
  if (cfg.n_steps) {
    doc["n_steps"] = *cfg.n_steps;
  } else {
    doc["n_steps"] = "auto";
  }
  doc["record_every"] = cfg.record_every;
  doc["outputs"] = json::array();
  for (OutputKind k : cfg.outputs) doc["outputs"].push_back(std::string(to_string(k)));
  doc["out_dir"] = cfg.out_dir.generic_string();
  doc["format"] = std::string(to_string(cfg.format));
  doc["tables"] = {{"spins", cfg.tables.spins}, {"h", cfg.tables.h_values}};
  return doc;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

ScenarioConfig preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return parse_config(json::parse(p.body));
  }
  throw Error(ErrorCode::ConfigError, "unknown preset '" + std::string(name) + "'");
}

std::string preset_description(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return std::string(p.description);
  }
  throw Error(ErrorCode::ConfigError, "unknown preset '" + std::string(name) + "'");
}

}  // namespace qslspin::scenario
