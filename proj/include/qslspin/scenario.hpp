#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qslspin::scenario {

enum class OutputKind {
  Trajectory,
  Hodograph,
  Frenet,
  DeviationCurve,
  QslReport,
  UncertaintyReport,
  BoundsTable,
  RatioTable,
};

std::string_view to_string(OutputKind kind) noexcept;
std::optional<OutputKind> parse_output_kind(std::string_view name) noexcept;

enum class Format { Csv, Json };

std::string_view to_string(Format f) noexcept;
std::optional<Format> parse_format(std::string_view name) noexcept;

struct TableSpec {
  std::vector<double> spins{0.5, 1.0, 1.5, 2.0};
  std::vector<double> h_values{0.5, 1.0, 2.0, 10.0, 100.0};
};

struct ScenarioConfig {
  std::string name = "scenario";
  double spin = 0.5;
  double h1 = 0.0;
  double h2 = 0.0;
  double H = 0.0;
  double omega = 1.0;
  double k = 0.0;
  double t_end = 1.0;
  std::optional<int> n_steps;  // empty means auto
  int record_every = 1;
  std::vector<OutputKind> outputs;
  std::filesystem::path out_dir = "out";
  Format format = Format::Csv;
  TableSpec tables;
};

// Throws Error(ConfigError) naming the offending field.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

std::vector<std::string> preset_names();
// Throws Error(ConfigError) for unknown names.
ScenarioConfig preset(std::string_view name);
std::string preset_description(std::string_view name);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// 17 significant digits; NaN written as "nan" in CSV and null in JSON.
std::string to_csv(const Table& t);
std::string to_json_text(const Table& t);
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

struct ManifestEntry {
  OutputKind kind = OutputKind::Trajectory;
  std::string path;  // relative to the output directory; empty when not applicable
  std::vector<std::string> columns;
  std::size_t rows = 0;
  bool applicable = true;
  std::string note;
  std::string checksum;  // fnv1a64 of the file bytes, hex
};

struct ResultManifest {
  std::string scenario;
  std::filesystem::path out_dir;
  std::vector<ManifestEntry> entries;

  nlohmann::json to_json() const;
};

// Writes every requested output plus manifest.json into cfg.out_dir.
// Regime violations become applicable = false entries with a note.
ResultManifest run_scenario(const ScenarioConfig& cfg);

// Builds one output table without touching the file system. Throws the
// library's Error when the regime does not allow it.
Table build_output(const ScenarioConfig& cfg, OutputKind kind);

enum class Suite { SpecialFunctions, Dynamics, Conservation, Qsl, All };

std::optional<Suite> parse_suite(std::string_view name) noexcept;
std::string_view to_string(Suite s) noexcept;

enum class CheckStatus { Pass, Fail, NotApplicable };

std::string_view to_string(CheckStatus s) noexcept;

struct CheckResult {
  std::string suite;
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const noexcept;
  nlohmann::json to_json() const;
};

struct ValidationOptions {
  // Restrict the conservation suite to one spin and/or modulus.
  std::optional<double> spin;
  std::optional<double> k;
};

ValidationReport validate(Suite suite, const ValidationOptions& options = {});

}  // namespace qslspin::scenario
