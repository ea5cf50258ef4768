#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gamedesign/scenario.hpp"

namespace fs = std::filesystem;
using gamedesign::json;

namespace {

int load_config(const std::string& path, json& config) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return gamedesign::kExitConfigError;
  }
  try {
    in >> config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return gamedesign::kExitConfigError;
  }
  return gamedesign::kExitOk;
}

int run_one(const json& config, const gamedesign::RunOptions& opts) {
  const auto artifacts = gamedesign::run_scenario(config, opts);
  for (const auto& d : artifacts.diagnostics) {
    std::cerr << "config error: " << d << "\n";
  }
  if (artifacts.diagnostics.empty()) {
    std::cout << artifacts.report.value("task", std::string("?")) << ": "
              << artifacts.report.value("verdict", std::string("?")) << "\n";
  }
  return artifacts.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pricing-based game design: solve, certify, design, regulate "
               "and simulate the catalog games"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  bool strict = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "csv";

  app.add_option("--out", out_dir, "Output directory for run artifacts");
  app.add_flag("--strict", strict,
               "Fail (exit 3) when a sampled certificate does not hold");
  app.add_option("--seed", seed, "Override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--format", format, "Trajectory format (csv)")
      ->check(CLI::IsMember({"csv"}));

  auto* run_cmd = app.add_subcommand(
      "run", "Run a scenario config (file or directory of configs)");
  run_cmd->add_option("config", config_path, "Path to scenario JSON or directory")
      ->required();

  auto* validate_cmd =
      app.add_subcommand("validate", "Schema-check a config without running");
  validate_cmd->add_option("config", config_path, "Path to scenario JSON")
      ->required();

  app.add_subcommand("reproduce",
                     "Run the bundled two-channel optical link study");

  CLI11_PARSE(app, argc, argv);

  gamedesign::RunOptions opts;
  opts.output_dir = out_dir;
  opts.strict = strict;
  if (seed_set) opts.seed_override = seed;

  if (run_cmd->parsed()) {
    if (fs::is_directory(config_path)) {
      return gamedesign::run_config_directory(config_path, opts);
    }
    json config;
    if (int rc = load_config(config_path, config)) return rc;
    return run_one(config, opts);
  }

  if (validate_cmd->parsed()) {
    json config;
    if (int rc = load_config(config_path, config)) return rc;
    const auto diagnostics = gamedesign::validate(config);
    for (const auto& d : diagnostics) std::cout << d << "\n";
    if (diagnostics.empty()) std::cout << "ok\n";
    return diagnostics.empty() ? gamedesign::kExitOk
                               : gamedesign::kExitConfigError;
  }

  // reproduce
  return run_one(gamedesign::reproduce_fixture(), opts);
}
