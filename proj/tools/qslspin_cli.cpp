#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qslspin/errors.hpp"
#include "qslspin/scenario.hpp"

namespace sc = qslspin::scenario;

namespace {

int run_command(const std::string& config_path, const std::string& preset_name,
                const std::string& out_dir, const std::string& format) {
  sc::ScenarioConfig cfg =
      config_path.empty() ? sc::preset(preset_name) : sc::load_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!format.empty()) cfg.format = *sc::parse_format(format);
  const sc::ResultManifest manifest = sc::run_scenario(cfg);
  for (const auto& e : manifest.entries) {
    if (e.applicable) {
      std::printf("%-20s %s (%zu rows)\n", std::string(sc::to_string(e.kind)).c_str(),
                  (cfg.out_dir / e.path).string().c_str(), e.rows);
    } else if (!e.path.empty()) {
      std::printf("%-20s %s (%zu rows; not_applicable: %s)\n",
                  std::string(sc::to_string(e.kind)).c_str(), (cfg.out_dir / e.path).string().c_str(),
                  e.rows, e.note.c_str());
    } else {
      std::printf("%-20s not_applicable: %s\n", std::string(sc::to_string(e.kind)).c_str(),
                  e.note.c_str());
    }
  }
  std::printf("manifest             %s\n", (cfg.out_dir / "manifest.json").string().c_str());
  return 0;
}

int validate_command(const std::string& suite_name, const sc::ValidationOptions& options,
                     const std::string& report_path) {
  const sc::Suite suite = *sc::parse_suite(suite_name);
  const sc::ValidationReport report = sc::validate(suite, options);
  for (const auto& c : report.checks) {
    std::printf("%-15s %-15s %-50s value=%.3e tol=%.1e%s%s\n",
                std::string(sc::to_string(c.status)).c_str(), c.suite.c_str(), c.name.c_str(),
                c.value, c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
  const std::string json = report.to_json().dump(2);
  if (report_path == "-") {
    std::cout << json << '\n';
  } else if (!report_path.empty()) {
    std::ofstream(report_path) << json << '\n';
  }
  std::printf("%s\n", report.ok() ? "validation passed" : "validation FAILED");
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-S dynamics in elliptic fields: scenarios, bounds and validation"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config or a preset");
  std::string config_path, preset_name, out_dir, format;
  auto* config_opt = run->add_option("--config", config_path, "Scenario JSON file")->check(CLI::ExistingFile);
  auto* preset_opt = run->add_option("--preset", preset_name, "Built-in preset (see list-presets)");
  config_opt->excludes(preset_opt);
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--format", format, "Series format")->check(CLI::IsMember({"csv", "json"}));

  auto* validate = app.add_subcommand("validate", "Run invariant suites");
  std::string suite_name = "all";
  validate->add_option("--suite", suite_name, "Suite to run")
      ->check(CLI::IsMember({"special_functions", "dynamics", "conservation", "qsl", "all"}));
  double spin = 0.0, k = 0.0;
  auto* spin_opt = validate->add_option("--spin", spin, "Restrict conservation to one spin");
  auto* k_opt = validate->add_option("--k", k, "Restrict conservation to one modulus");
  std::string report_path;
  validate->add_option("--report", report_path, "Write the JSON report here ('-' for stdout)");

  app.add_subcommand("list-presets", "List built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (config_path.empty() && preset_name.empty()) {
        std::fprintf(stderr, "run: give --config <path> or --preset <name>\n");
        return 2;
      }
      return run_command(config_path, preset_name, out_dir, format);
    }
    if (*validate) {
      sc::ValidationOptions options;
      if (*spin_opt) options.spin = spin;
      if (*k_opt) options.k = k;
      return validate_command(suite_name, options, report_path);
    }
    for (const auto& name : sc::preset_names()) {
      std::printf("%-16s %s\n", name.c_str(), sc::preset_description(name).c_str());
    }
    return 0;
  } catch (const qslspin::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
