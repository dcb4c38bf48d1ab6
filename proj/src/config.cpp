#include "dnls/config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace dnls {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 9> kExperimentNames{{
    {Experiment::persistence, "persistence"},
    {Experiment::constraint, "constraint"},
    {Experiment::strichartz, "strichartz"},
    {Experiment::inhomog_strichartz, "inhomog-strichartz"},
    {Experiment::weighted_semigroup, "weighted-semigroup"},
    {Experiment::picard_vs_stepper, "picard-vs-stepper"},
    {Experiment::approx_sequence, "approx-sequence"},
    {Experiment::lipschitz, "lipschitz"},
    {Experiment::order, "order"},
}};

constexpr std::array<std::pair<DataKind, const char*>, 3> kKindNames{{
    {DataKind::gaussian, "gaussian"},
    {DataKind::plane_wave, "plane-wave"},
    {DataKind::random, "random"},
}};

std::string join_names(const auto& table) {
  std::string s;
  for (const auto& [_, name] : table) s += (s.empty() ? "" : ", ") + std::string(name);
  return s;
}

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

// Field name -> source line, used to point validation errors at the document.
using LineMap = std::map<std::string, int>;

void require(bool ok, const LineMap& lines, const std::string& field, const std::string& message) {
  if (ok) return;
  const auto it = lines.find(field);
  throw ConfigError(it == lines.end() ? 0 : it->second, field, message);
}

void validate_fields(const RunConfig& c, const LineMap& lines) {
  const Index n = c.grid.n;
  require(n >= 16 && n <= (Index(1) << 16) && (n & (n - 1)) == 0, lines, "grid.n",
          "must be a power of two in [16, 65536]");
  require(std::isfinite(c.grid.L) && c.grid.L > 0.0, lines, "grid.L", "must be finite and > 0");
  require(std::isfinite(c.time.T) && c.time.T > 0.0, lines, "time.T", "must be finite and > 0");
  require(c.time.M >= 1 && c.time.M <= (Index(1) << 20), lines, "time.M",
          "must be in [1, 1048576]");
  require(std::isfinite(c.physics.lambda), lines, "physics.lambda", "must be finite");
  require(c.physics.r > 0.0 && c.physics.r <= 1.0, lines, "physics.r",
          "must lie in the range (0, 1]");
  require(std::isfinite(c.data.amplitude) && c.data.amplitude >= 0.0, lines, "data.amplitude",
          "must be finite and >= 0");
  require(std::isfinite(c.data.width) && c.data.width > 0.0, lines, "data.width",
          "must be finite and > 0");
  require(std::abs(Index(c.data.mode)) < n / 2, lines, "data.mode", "must satisfy |mode| < n/2");
  require(!c.output_dir.empty(), lines, "output_dir", "must not be empty");
}

class Reader {
 public:
  explicit Reader(LineMap& lines) : lines_(lines) {}

  // Rejects keys of `map` outside `allowed`.
  void check_keys(const YAML::Node& map, const std::string& prefix,
                  const std::set<std::string>& allowed) {
    if (!map.IsMap()) {
      throw ConfigError(line_of(map), prefix.empty() ? "<document>" : prefix, "expected a mapping");
    }
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      const std::string field = prefix.empty() ? key : prefix + "." + key;
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw ConfigError(line_of(kv.first), field, "unknown key (expected one of: " + list + ")");
      }
      lines_[field] = line_of(kv.second);
    }
  }

  template <typename T>
  void read(const YAML::Node& map, const std::string& prefix, const char* key, T& out) {
    const YAML::Node node = map[key];
    if (!node) return;
    const std::string field = prefix + "." + key;
    if (!node.IsScalar()) throw ConfigError(line_of(node), field, "expected a scalar");
    try {
      out = node.as<T>();
    } catch (const YAML::BadConversion&) {
      throw ConfigError(line_of(node), field, "cannot convert '" + node.Scalar() + "'");
    }
  }

 private:
  LineMap& lines_;
};

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [v, name] : kExperimentNames)
    if (v == e) return name;
  return "?";
}

std::string to_string(DataKind k) {
  for (const auto& [v, name] : kKindNames)
    if (v == k) return name;
  return "?";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& [v, s] : kExperimentNames)
    if (name == s) return v;
  return std::nullopt;
}

std::optional<DataKind> parse_data_kind(const std::string& name) {
  for (const auto& [v, s] : kKindNames)
    if (name == s) return v;
  return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> list = [] {
    std::vector<Experiment> v;
    for (const auto& [e, _] : kExperimentNames) v.push_back(e);
    return v;
  }();
  return list;
}

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         field + ": " + message),
      line_(line),
      field_(std::move(field)) {}

RunConfig parse_config(const std::string& text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, "<document>", e.msg);
  }
  if (!doc || doc.IsNull()) throw ConfigError(0, "<document>", "empty configuration");

  LineMap lines;
  Reader rd(lines);
  RunConfig c;
  rd.check_keys(doc, "", {"experiment", "grid", "time", "physics", "data", "output_dir"});

  const YAML::Node exp = doc["experiment"];
  if (!exp) throw ConfigError(0, "experiment", "missing required key");
  {
    const std::string name = exp.IsScalar() ? exp.Scalar() : std::string();
    const auto e = parse_experiment(name);
    if (!e) {
      throw ConfigError(line_of(exp), "experiment",
                        "unknown experiment '" + name + "' (expected one of: " +
                            join_names(kExperimentNames) + ")");
    }
    c.experiment = *e;
  }

  if (const YAML::Node g = doc["grid"]) {
    rd.check_keys(g, "grid", {"n", "L"});
    long long n = c.grid.n;
    rd.read(g, "grid", "n", n);
    c.grid.n = Index(n);
    rd.read(g, "grid", "L", c.grid.L);
  }

  if (const YAML::Node t = doc["time"]) {
    rd.check_keys(t, "time", {"T", "M", "dt"});
    rd.read(t, "time", "T", c.time.T);
    if (t["M"] && t["dt"]) throw ConfigError(line_of(t["dt"]), "time.dt", "give either M or dt, not both");
    if (t["M"]) {
      long long M = 0;
      rd.read(t, "time", "M", M);
      c.time.M = Index(M);
    }
    if (t["dt"]) {
      double dt = 0.0;
      rd.read(t, "time", "dt", dt);
      const double slices = c.time.T / dt;
      if (!(dt > 0.0) || !std::isfinite(slices) ||
          std::abs(slices - std::round(slices)) > 1e-9 * slices || std::round(slices) < 1.0) {
        throw ConfigError(line_of(t["dt"]), "time.dt", "must be > 0 and divide T into an integer number of steps");
      }
      c.time.M = Index(std::llround(slices));
      lines["time.M"] = line_of(t["dt"]);
    }
  }

  if (const YAML::Node p = doc["physics"]) {
    rd.check_keys(p, "physics", {"lambda", "r"});
    rd.read(p, "physics", "lambda", c.physics.lambda);
    rd.read(p, "physics", "r", c.physics.r);
  }

  if (const YAML::Node d = doc["data"]) {
    rd.check_keys(d, "data", {"kind", "amplitude", "width", "seed", "mode"});
    if (const YAML::Node k = d["kind"]) {
      const std::string name = k.IsScalar() ? k.Scalar() : std::string();
      const auto kind = parse_data_kind(name);
      if (!kind) {
        throw ConfigError(line_of(k), "data.kind",
                          "unknown kind '" + name + "' (expected one of: " + join_names(kKindNames) + ")");
      }
      c.data.kind = *kind;
    }
    rd.read(d, "data", "amplitude", c.data.amplitude);
    rd.read(d, "data", "width", c.data.width);
    rd.read(d, "data", "seed", c.data.seed);
    rd.read(d, "data", "mode", c.data.mode);
  }

  if (const YAML::Node o = doc["output_dir"]) {
    if (!o.IsScalar()) throw ConfigError(line_of(o), "output_dir", "expected a path");
    c.output_dir = o.Scalar();
  }

  validate_fields(c, lines);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, path, "cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& config) { validate_fields(config, {}); }

std::string serialize(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "experiment" << YAML::Value << to_string(c.experiment);
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << static_cast<long long>(c.grid.n);
  out << YAML::Key << "L" << YAML::Value << c.grid.L;
  out << YAML::EndMap;
  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "T" << YAML::Value << c.time.T;
  out << YAML::Key << "M" << YAML::Value << static_cast<long long>(c.time.M);
  out << YAML::EndMap;
  out << YAML::Key << "physics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lambda" << YAML::Value << c.physics.lambda;
  out << YAML::Key << "r" << YAML::Value << c.physics.r;
  out << YAML::EndMap;
  out << YAML::Key << "data" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(c.data.kind);
  out << YAML::Key << "amplitude" << YAML::Value << c.data.amplitude;
  out << YAML::Key << "width" << YAML::Value << c.data.width;
  out << YAML::Key << "seed" << YAML::Value << c.data.seed;
  out << YAML::Key << "mode" << YAML::Value << c.data.mode;
  out << YAML::EndMap;
  out << YAML::Key << "output_dir" << YAML::Value << YAML::DoubleQuoted << c.output_dir;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace dnls
