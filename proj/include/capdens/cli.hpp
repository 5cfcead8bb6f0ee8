#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "capdens/capacity_types.hpp"
#include "capdens/geometry.hpp"
#include "capdens/grid.hpp"

namespace capdens {

struct OutputOptions {
  std::string dir = ".";
  std::string format = "json";  // json | csv | both
  std::string prefix = "report";
};

/// Parsed experiment description. Variant-specific parameters stay as raw
/// JSON and are validated by the dispatcher; `echo` is the fully resolved
/// config (defaults filled in) and reproduces the run when fed back.
struct ExperimentConfig {
  int version = 1;
  SpaceSpec space;
  Box box;
  double h = 0.0;
  std::vector<double> h_ladder;  // optional refinement ladder (strictly decreasing)
  SolverConfig solver;
  uint64_t seed = 0;
  int threads = 1;
  OutputOptions output;
  std::string variant;
  nlohmann::json experiment;
  nlohmann::json echo;
};

/// Self-contained run record. `table` carries the plot-ready grid emitted as
/// CSV; `results` is the full structured output. Timing lives apart from the
/// deterministic payload.
struct Report {
  nlohmann::json config_echo;
  nlohmann::json results;
  nlohmann::json diagnostics;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  nlohmann::json to_json(bool include_timing = true) const;
};

/// Strict parse: unknown keys anywhere are hard errors ("unknown-key").
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_file(const std::string& path);

/// Set descriptions are part of the config schema.
struct SetSpec;
SetSpec set_from_json(const nlohmann::json& j);

/// Runs the configured experiment; any module error resurfaces with the
/// failing stage named in the message.
Report run_config(const ExperimentConfig& config);

/// Writes <prefix>.json and/or <prefix>.csv into `dir`; returns the paths.
/// CSV: '.' decimal, UTF-8, '\n' line ends, 17 significant digits.
std::vector<std::string> emit_report(const Report& report, const OutputOptions& out);

}  // namespace capdens
