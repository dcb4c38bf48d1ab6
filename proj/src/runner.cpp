#include "dnls/runner.hpp"

#include "dnls/experiments.hpp"
#include "dnls/gauge.hpp"
#include "dnls/picard.hpp"
#include "dnls/report.hpp"
#include "dnls/timestepper.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#ifndef DNLS_LAB_VERSION
#define DNLS_LAB_VERSION "0.0.0"
#endif

namespace dnls {

namespace fs = std::filesystem;

namespace {

// Thresholds for the per-experiment verdicts.
constexpr double kRefinementChange = 0.10;  // ensemble max ratio, n -> 2n
constexpr double kAgreement = 1e-6;         // picard vs split-step, L^inf_T L^2
constexpr double kSpreadBound = 5.0;        // approximation ratios max / min
constexpr double kLipschitzSpread = 2.0;
constexpr Index kEnsembleTrials = 100;
constexpr Index kInhomogTrials = 100;
constexpr Index kApproxLevels = 5;

struct Result {
  std::string csv;
  nlohmann::json summary;
  bool passed = true;
};

std::string to_text(const CsvTable& t) {
  std::ostringstream os;
  t.write(os);
  return os.str();
}

std::string to_text(const NormReport& r) {
  std::ostringstream os;
  r.write_csv(os);
  return os.str();
}

struct Context {
  RunConfig cfg;
  Grid grid;
  StepperParams stepper;
  std::ostream* log;

  void say(const std::string& s) const {
    if (log) *log << s << '\n';
  }
};

std::string cell(double v) { return format_real(v); }
std::string cell(Index v) { return std::to_string(v); }
std::string cell(std::uint64_t v) { return std::to_string(v); }

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Result persistence(const Context& cx) {
  const Field u0 = initial_data(cx.cfg.data, cx.grid);
  const auto res = persistence_experiment(u0, cx.cfg.physics.lambda, cx.cfg.physics.r,
                                          cx.cfg.time.T, cx.cfg.time.M, cx.stepper);
  Result out{to_text(res.report), {}, res.success};
  out.summary = res.report.summary_json();
  out.summary["initial_h2"] = res.initial_h2;
  out.summary["initial_weighted"] = res.initial_weighted;
  out.summary["warnings"] = res.warnings;
  return out;
}

Result constraint(const Context& cx) {
  const Field u0 = initial_data(cx.cfg.data, cx.grid);
  const double lambda = cx.cfg.physics.lambda;
  const auto res = constraint_propagation_experiment(gauge_forward(u0, lambda), lambda,
                                                     cx.cfg.time.T, cx.cfg.time.M, cx.stepper,
                                                     std::nullopt, cx.cfg.physics.r);
  Result out{to_text(res.report), {}, res.constrained};
  out.summary = res.report.summary_json();
  out.summary["tolerance"] = kConstraintTolerance;
  out.summary["constrained"] = res.constrained;
  return out;
}

// Shared by the three ensemble experiments: runs at n and 2n and compares
// the max ratios.
template <typename Ensemble>
Result ensemble_experiment(const Context& cx, const std::vector<std::string>& cases, Ensemble&& run) {
  CsvTable csv({"case", "seed", "n", "L", "time", "lhs", "rhs", "ratio"});
  Result out{{}, {}, true};
  const Grid fine = make_grid(2 * cx.grid.size(), cx.grid.length());
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < cases.size(); ++c) {
    double max_ratio[2] = {0.0, 0.0};
    int level = 0;
    for (const Grid* g : {&cx.grid, &fine}) {
      cx.say("  " + cases[c] + " at n=" + std::to_string(g->size()));
      const EnsembleSummary ens = run(c, *g);
      for (const auto& t : ens.trials) {
        csv.add_row({cases[c], cell(t.seed), cell(t.n_points), cell(t.box_length),
                         cell(t.time), cell(t.lhs), cell(t.rhs_total), cell(t.ratio)});
      }
      max_ratio[level++] = ens.max_ratio;
    }
    const double change = relative_change(max_ratio[0], max_ratio[1]);
    const bool ok = change <= kRefinementChange;
    out.passed = out.passed && ok;
    rows.push_back({{"case", cases[c]},
                    {"max_ratio_n", max_ratio[0]},
                    {"max_ratio_2n", max_ratio[1]},
                    {"relative_change", change},
                    {"stable", ok}});
  }
  out.csv = to_text(csv);
  out.summary = {{"cases", rows}, {"threshold", kRefinementChange}};
  return out;
}

const std::vector<StrichartzPair>& standard_pairs() {
  static const std::vector<StrichartzPair> pairs{
      {kInfinity, 4.0}, {2.0, kInfinity}, {4.0, 8.0}};
  return pairs;
}

std::vector<std::string> pair_labels() {
  std::vector<std::string> v;
  for (const auto& p : standard_pairs()) v.push_back("(" + p.label() + ")");
  return v;
}

Result strichartz(const Context& cx) {
  return ensemble_experiment(cx, pair_labels(), [&](std::size_t c, const Grid& g) {
    return strichartz_ensemble(g, standard_pairs()[c], kEnsembleTrials, cx.cfg.data.seed,
                               cx.cfg.time.T, cx.cfg.time.M);
  });
}

Result inhomog_strichartz(const Context& cx) {
  return ensemble_experiment(cx, pair_labels(), [&](std::size_t c, const Grid& g) {
    const auto& p = standard_pairs()[c];
    return inhomogeneous_strichartz_ensemble(g, p, p, kInhomogTrials, cx.cfg.data.seed,
                                             cx.cfg.time.T, cx.cfg.time.M);
  });
}

Result weighted_semigroup(const Context& cx) {
  const double r = cx.cfg.physics.r;
  if (!(r < 1.0)) throw std::invalid_argument("weighted-semigroup requires physics.r in (0, 1)");
  return ensemble_experiment(cx, {"r=" + format_real(r)}, [&](std::size_t, const Grid& g) {
    return weighted_semigroup_ensemble(g, r, cx.cfg.time.T, kEnsembleTrials, cx.cfg.data.seed);
  });
}

Result picard_vs_stepper(const Context& cx) {
  const double lambda = cx.cfg.physics.lambda;
  const Field phi0 = gauge_forward(initial_data(cx.cfg.data, cx.grid), lambda);
  const Field psi0 = constraint_map(phi0, lambda);
  PicardConfig pc;
  pc.time_steps = cx.cfg.time.M;
  pc.r = cx.cfg.physics.r;
  pc.lambda = lambda;
  pc.T = cx.cfg.time.T;
  const PicardSolution sol = picard_solve(phi0, psi0, pc);

  StepperParams sp = cx.stepper;
  sp.dt = cx.cfg.time.dt() / 4.0;
  const auto split = evolve_system(phi0, psi0, lambda, cx.cfg.time.T, cx.cfg.time.M, sp);

  CsvTable csv({"t", "phi_picard_l2", "phi_splitstep_l2", "difference_l2"});
  Result out{{}, {}, true};
  double max_diff = 0.0;
  for (Index m = 0; m <= sol.phi.steps(); ++m) {
    const double d = lp_norm(sol.phi[m] - split.first[m], 2.0);
    max_diff = std::max(max_diff, d);
    csv.add_row({cell(sol.phi.time(m)), cell(lp_norm(sol.phi[m], 2.0)),
                     cell(lp_norm(split.first[m], 2.0)), cell(d)});
  }
  const bool contracting = sol.diagnostics.contraction_ratio < 1.0;
  out.csv = to_text(csv);
  out.passed = max_diff <= kAgreement && contracting;
  out.summary = {{"max_difference", max_diff},
                 {"tolerance", kAgreement},
                 {"contracting", contracting},
                 {"system_residual", system_residual(sol.phi, sol.psi, lambda)},
                 {"diagnostics", sol.diagnostics.to_json()}};
  return out;
}

Result approx_sequence(const Context& cx) {
  const Field u0 = initial_data(cx.cfg.data, cx.grid);
  const auto table = approximation_sequence_experiment(u0, cx.cfg.physics.lambda, cx.cfg.physics.r,
                                                       cx.cfg.time.T, cx.cfg.time.M, kApproxLevels,
                                                       cx.stepper);
  CsvTable csv({"level", "cutoff_fraction", "rho", "lhs", "rhs", "ratio", "resolved"});
  Result out{{}, {}, true};
  for (std::size_t j = 0; j < table.levels.size(); ++j) {
    const bool has_pair = j < table.pairs.size();
    csv.add_row({cell(Index(j)), cell(table.levels[j].cutoff_fraction),
                     cell(table.levels[j].rho), has_pair ? cell(table.pairs[j].lhs) : "",
                     has_pair ? cell(table.pairs[j].rhs) : "",
                     has_pair ? cell(table.pairs[j].ratio) : "",
                     has_pair ? (table.pairs[j].resolved ? "1" : "0") : ""});
  }
  out.csv = to_text(csv);
  // zero data resolves nothing and passes trivially
  const bool enough = table.resolved_pairs >= 3 || table.rho_max == 0.0;
  out.passed = enough && table.cauchy && table.ratio_spread <= kSpreadBound;
  out.summary = {{"rho_max", table.rho_max},
                 {"cauchy", table.cauchy},
                 {"ratio_spread", table.ratio_spread},
                 {"resolved_pairs", table.resolved_pairs},
                 {"spread_bound", kSpreadBound}};
  return out;
}

Result lipschitz(const Context& cx) {
  const double lambda = cx.cfg.physics.lambda;
  const Field phi0 = gauge_forward(initial_data(cx.cfg.data, cx.grid), lambda);
  const Field g = random_decaying_field(cx.grid, cx.cfg.data.seed);
  CsvTable csv({"epsilon", "lhs", "rhs", "ratio"});
  Result out{{}, {}, true};
  double lo = kInfinity;
  double hi = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    cx.say("  epsilon " + format_real(eps));
    const auto rep = lipschitz_data_experiment(phi0, phi0 + eps * g, lambda, cx.cfg.physics.r,
                                               cx.cfg.time.T, cx.cfg.time.M, cx.stepper);
    csv.add_row({cell(eps), cell(rep.lhs), cell(rep.rhs), cell(rep.ratio)});
    lo = std::min(lo, rep.ratio);
    hi = std::max(hi, rep.ratio);
  }
  const double spread = lo > 0.0 ? hi / lo : kInfinity;
  out.csv = to_text(csv);
  out.passed = spread <= kLipschitzSpread;
  out.summary = {{"ratio_spread", number(spread)}, {"spread_bound", kLipschitzSpread}};
  return out;
}

Result order(const Context& cx) {
  CsvTable csv({"scheme", "dt", "error", "order"});
  Result out{{}, {}, true};
  OrderProblem prob{initial_data(cx.cfg.data, cx.grid), cx.cfg.physics.lambda, cx.cfg.time.T,
                    cx.cfg.time.dt()};
  nlohmann::json schemes = nlohmann::json::object();
  for (auto [scheme, expected, tol] : {std::tuple{Scheme::ifrk4_dnls, 4.0, 0.3},
                                       std::tuple{Scheme::splitstep_system, 2.0, 0.2}}) {
    cx.say("  " + to_string(scheme));
    if (scheme == Scheme::splitstep_system) prob.initial = gauge_forward(prob.initial, prob.lambda);
    const OrderResult res = observed_order(scheme, prob);
    for (int i = 0; i < 3; ++i) {
      csv.add_row({to_string(scheme), cell(prob.dt / double(1 << i)), cell(res.errors[i]),
                       cell(res.order)});
    }
    const bool ok = res.skipped || std::abs(res.order - expected) <= tol;
    out.passed = out.passed && ok;
    schemes[to_string(scheme)] = {{"order", res.order},
                                  {"expected", expected},
                                  {"tolerance", tol},
                                  {"skipped", res.skipped},
                                  {"ok", ok}};
  }
  out.csv = to_text(csv);
  out.summary = {{"schemes", schemes}};
  return out;
}

Result dispatch(const Context& cx) {
  switch (cx.cfg.experiment) {
    case Experiment::persistence: return persistence(cx);
    case Experiment::constraint: return constraint(cx);
    case Experiment::strichartz: return strichartz(cx);
    case Experiment::inhomog_strichartz: return inhomog_strichartz(cx);
    case Experiment::weighted_semigroup: return weighted_semigroup(cx);
    case Experiment::picard_vs_stepper: return picard_vs_stepper(cx);
    case Experiment::approx_sequence: return approx_sequence(cx);
    case Experiment::lipschitz: return lipschitz(cx);
    case Experiment::order: return order(cx);
  }
  throw std::logic_error("unhandled experiment");
}

nlohmann::json config_json(const RunConfig& c) {
  return {{"experiment", to_string(c.experiment)},
          {"grid", {{"n", c.grid.n}, {"L", c.grid.L}}},
          {"time", {{"T", c.time.T}, {"M", c.time.M}}},
          {"physics", {{"lambda", c.physics.lambda}, {"r", c.physics.r}}},
          {"data",
           {{"kind", to_string(c.data.kind)},
            {"amplitude", c.data.amplitude},
            {"width", c.data.width},
            {"seed", c.data.seed},
            {"mode", c.data.mode}}},
          {"output_dir", c.output_dir}};
}

nlohmann::json versions() {
  return {{"dnls-lab", DNLS_LAB_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_manifest(RunOutcome& out, const nlohmann::json& config, double wall_seconds) {
  fs::create_directories(out.output_dir);
  out.artifacts.push_back("manifest.json");
  const nlohmann::json manifest{{"config", config},
                                {"versions", versions()},
                                {"wall_time_seconds", wall_seconds},
                                {"exit_code", out.exit_code},
                                {"status", out.status},
                                {"message", out.message},
                                {"artifacts", out.artifacts}};
  write_text(fs::path(out.output_dir) / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

Field initial_data(const DataSpec& data, const Grid& grid) {
  switch (data.kind) {
    case DataKind::gaussian: return gaussian(grid, data.amplitude, data.width);
    case DataKind::plane_wave: {
      const double k = 2.0 * std::numbers::pi * data.mode / grid.length();
      const double a = data.amplitude;
      return Field::sample(grid, [=](double x) { return a * std::polar(1.0, k * x); });
    }
    case DataKind::random: return data.amplitude * random_decaying_field(grid, data.seed, data.width);
  }
  throw std::logic_error("unhandled data kind");
}

std::string artifact_stem(const RunConfig& c) {
  return to_string(c.experiment) + "-" + std::to_string(c.data.seed) + "-" +
         std::to_string(c.grid.n) + "-" + std::to_string(c.time.M);
}

RunOutcome run(RunConfig config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.seed) config.data.seed = *options.seed;
  if (options.out_dir) config.output_dir = *options.out_dir;

  RunOutcome out;
  out.output_dir = config.output_dir;
  const std::string stem = artifact_stem(config);
  std::ostream* log = options.quiet ? nullptr : options.log;

  try {
    validate(config);
    Context cx{config, make_grid(config.grid.n, config.grid.L), StepperParams{}, log};
    cx.stepper.dt = config.time.dt();
    cx.say("running " + to_string(config.experiment) + " (" + stem + ")");

    Result res = dispatch(cx);
    fs::create_directories(out.output_dir);

    write_text(fs::path(out.output_dir) / (stem + ".csv"), res.csv);
    out.artifacts.push_back(stem + ".csv");

    out.exit_code = res.passed ? kExitSuccess : kExitAssertion;
    out.status = res.passed ? "success" : "assertion-failure";
    out.summary = res.summary;
  } catch (const NonConvergence& e) {
    out.exit_code = kExitSolverError;
    out.status = "solver-error";
    out.message = e.what();
    out.summary = {{"error", "NonConvergence"}, {"diagnostics", e.diagnostics().to_json()}};
  } catch (const BlowUp& e) {
    out.exit_code = kExitSolverError;
    out.status = "solver-error";
    out.message = e.what();
    out.summary = {{"error", "BlowUp"}, {"time", e.time()}, {"growth", number(e.growth())}};
  } catch (const std::exception& e) {
    out.exit_code = kExitSolverError;
    out.status = "solver-error";
    out.message = e.what();
    out.summary = {{"error", e.what()}};
  }

  out.summary["experiment"] = to_string(config.experiment);
  out.summary["status"] = out.status;
  out.summary["seed"] = config.data.seed;
  try {
    fs::create_directories(out.output_dir);
    write_text(fs::path(out.output_dir) / (stem + ".json"), out.summary.dump(2) + "\n");
    out.artifacts.push_back(stem + ".json");
  } catch (const std::exception& e) {
    if (out.message.empty()) out.message = e.what();
    out.exit_code = kExitSolverError;
    out.status = "solver-error";
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, config_json(config), wall);
  if (log) *log << "status: " << out.status << (out.message.empty() ? "" : " (" + out.message + ")") << '\n';
  return out;
}

RunOutcome run_file(const std::string& path, const RunOptions& options) {
  RunConfig config;
  try {
    config = load_config(path);
  } catch (const std::exception& e) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    out.exit_code = kExitSolverError;
    out.status = "config-error";
    out.message = e.what();
    out.output_dir = options.out_dir.value_or(RunConfig{}.output_dir);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(out, {{"path", path}}, wall);
    return out;
  }
  return run(std::move(config), options);
}

std::string csv_columns_help() {
  return R"(CSV columns by experiment (one file <experiment>-<seed>-<n>-<M>.csv per run):
  persistence         t, h2, weighted_r, sup, constraint_residual (empty)
                      one row per time slice of the DNLS solution u
  constraint          t, h2, weighted_r, sup, constraint_residual
                      norms of phi and the relative residual of psi - (phi_x + i lambda/2 |phi|^2 phi)
  strichartz          case, seed, n, L, time, lhs, rhs, ratio
                      100 random trials per pair (inf,4), (2,inf), (4,8), at n and 2n
  inhomog-strichartz  case, seed, n, L, time, lhs, rhs, ratio
                      100 random space-time forcings per pair, at n and 2n
  weighted-semigroup  case, seed, n, L, time, lhs, rhs, ratio
                      100 random trials at r = physics.r (must be < 1) and t = T, at n and 2n
  picard-vs-stepper   t, phi_picard_l2, phi_splitstep_l2, difference_l2
  approx-sequence     level, cutoff_fraction, rho, lhs, rhs, ratio, resolved
                      lhs/rhs compare level j with j+1; the last level has no pair;
                      resolved = 0 marks pairs whose data differ only by roundoff
  lipschitz           epsilon, lhs, rhs, ratio
                      perturbations phi0 + epsilon g for epsilon = 1e-2, 1e-3, 1e-4
  order               scheme, dt, error, order
                      final-time L2 error at dt = T/M, dt/2, dt/4 against a dt/16 reference
)";
}

}  // namespace dnls
