#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamedesign/catalog.hpp"
#include "gamedesign/game.hpp"

namespace gamedesign {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Game instance built from a config: the generic spec plus the typed
/// catalog struct needed by game-specific tasks.
struct BuiltGame {
  GameSpec spec;
  std::optional<WirelessSirGame> wireless;
  std::optional<OpticalOsnrGame> osnr;
  std::optional<SeparableLogGame> separable;
};

BuiltGame build_game(const json& game_config);

/// Schema check without execution; an empty list means runnable. Each
/// diagnostic names the offending field.
std::vector<std::string> validate(const json& config);

struct RunOptions {
  std::filesystem::path output_dir = ".";
  bool strict = false;          // certificate failures become exit code 3
  std::optional<std::uint64_t> seed_override;
  bool write_artifacts = true;  // trajectory.csv / report.json / manifest.json
};

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitCertificateFailure = 3;

struct RunArtifacts {
  int exit_code = kExitOk;
  json report;
  json manifest;
  std::vector<std::string> diagnostics;  // config errors, if any
};

/// Executes one scenario: writes trajectory.csv (when the task produces
/// one), report.json and manifest.json into the output directory.
RunArtifacts run_scenario(const json& config, const RunOptions& opts);

/// Runs every *.json config in a directory concurrently, each into its own
/// subdirectory of opts.output_dir. Returns the worst exit code.
int run_config_directory(const std::filesystem::path& dir,
                         const RunOptions& opts);

/// The checked-in reproduction fixture (system matrix, gains, noise, initial
/// conditions and iteration counts of the two-channel optical link study).
json reproduce_fixture();

}  // namespace gamedesign
