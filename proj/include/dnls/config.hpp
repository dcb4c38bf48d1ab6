#pragma once

// Run configuration for dnls-lab, read from a YAML document:
//
//   experiment: persistence
//   grid:    { n: 1024, L: 64 }
//   time:    { T: 0.5, M: 256 }     # or dt instead of M (T/dt must be an integer)
//   physics: { lambda: 1, r: 0.5 }
//   data:    { kind: gaussian, amplitude: 0.5, width: 1, seed: 42, mode: 1 }
//   output_dir: out
//
// Unknown keys are rejected. Errors carry the line of the offending node.

#include "dnls/spectral.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnls {

enum class Experiment {
  persistence,
  constraint,
  strichartz,
  inhomog_strichartz,
  weighted_semigroup,
  picard_vs_stepper,
  approx_sequence,
  lipschitz,
  order,
};

enum class DataKind { gaussian, plane_wave, random };

std::string to_string(Experiment e);
std::string to_string(DataKind k);
std::optional<Experiment> parse_experiment(const std::string& name);
std::optional<DataKind> parse_data_kind(const std::string& name);
const std::vector<Experiment>& all_experiments();

struct GridSpec {
  Index n = 1024;
  double L = 64.0;
  bool operator==(const GridSpec&) const = default;
};

struct TimeSpec {
  double T = 0.5;
  Index M = 256;  // number of stored time slices after t = 0
  double dt() const { return T / double(M); }
  bool operator==(const TimeSpec&) const = default;
};

struct PhysicsSpec {
  double lambda = 1.0;
  double r = 0.5;
  bool operator==(const PhysicsSpec&) const = default;
};

struct DataSpec {
  DataKind kind = DataKind::gaussian;
  double amplitude = 0.5;
  double width = 1.0;
  std::uint64_t seed = 42;
  int mode = 1;  // plane-wave: k = 2 pi mode / L
  bool operator==(const DataSpec&) const = default;
};

struct RunConfig {
  Experiment experiment = Experiment::persistence;
  GridSpec grid;
  TimeSpec time;
  PhysicsSpec physics;
  DataSpec data;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

/// Parse or validation failure. line() is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Throws ConfigError (line 0) if a field is out of range.
void validate(const RunConfig& config);

/// Full YAML document; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

}  // namespace dnls
