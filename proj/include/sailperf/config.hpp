#pragma once

#include <filesystem>
#include <string>

#include "sailperf/boat.hpp"
#include "sailperf/harness.hpp"

namespace sailperf::config {

/// Everything the CLI can set, with the built-in experiment defaults.
/// Loaded from a JSON file with sections "grid", "sim", "wind", "fuzzy" and
/// "output"; every key is optional and falls back to the default here.
struct AppConfig {
  harness::ExperimentGrid grid{};
  sim::SimParams params{};
  fuzzy::ControllerLayout layout{};
  std::filesystem::path out_dir{"out"};
  int threads{1};
  bool normalized{false};
  bool write_logs{false};
};

/// Parses a JSON document. Unknown sections or keys are rejected so typos
/// do not silently fall back to defaults. Throws std::runtime_error with a
/// description on any parse or validation failure.
AppConfig parse_config(const std::string& text);

/// parse_config over a file's contents; the file name is included in error
/// messages.
AppConfig load_config(const std::filesystem::path& path);

}  // namespace sailperf::config
