#pragma once

// Experiment dispatch for dnls-lab: one experiment per invocation, writing
//   <experiment>-<seed>-<n>-<M>.csv   the data table
//   <experiment>-<seed>-<n>-<M>.json  summary and pass/fail verdict
//   manifest.json                     config echo, versions, wall time, status
// into the output directory.

#include "dnls/config.hpp"
#include "dnls/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dnls {

enum ExitCode : int { kExitSuccess = 0, kExitAssertion = 1, kExitSolverError = 2 };

struct RunOptions {
  std::optional<std::string> out_dir;    // overrides config.output_dir
  std::optional<std::uint64_t> seed;     // overrides config.data.seed
  bool quiet = false;
  std::ostream* log = nullptr;           // progress lines; nullptr or quiet silences them
};

struct RunOutcome {
  int exit_code = kExitSuccess;
  std::string status;  // "success", "assertion-failure", "solver-error"
  std::string message;
  std::string output_dir;
  std::vector<std::string> artifacts;  // file names inside output_dir, manifest last
  nlohmann::json summary;
};

/// Initial data described by the data section, sampled on `grid`.
Field initial_data(const DataSpec& data, const Grid& grid);

/// <experiment>-<seed>-<n>-<M>
std::string artifact_stem(const RunConfig& config);

RunOutcome run(RunConfig config, const RunOptions& options = {});

/// Loads and runs a config file. A config that fails to load still yields a
/// manifest (in options.out_dir, or "out") and exit code 2.
RunOutcome run_file(const std::string& path, const RunOptions& options = {});

/// Per-experiment CSV column documentation, for --help.
std::string csv_columns_help();

}  // namespace dnls
