// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include "dnls/experiments.hpp"
#include "dnls/gauge.hpp"
#include "dnls/picard.hpp"
#include "dnls/runner.hpp"
#include "dnls/timestepper.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace dnls;
namespace fs = std::filesystem;
using std::numbers::pi;
using Complex = std::complex<double>;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

StepperParams split(double dt) { return {dt, Scheme::splitstep_system, true}; }
StepperParams ifrk4(double dt) { return {dt, Scheme::ifrk4_dnls, true}; }

double max_slice_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  double d = 0.0;
  for (Index m = 0; m <= a.steps(); ++m) d = std::max(d, lp_norm(a[m] - b[m], 2.0));
  return d;
}

double max_relative_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) worst = std::max(worst, relative_change(a[m], b[m]));
  return worst;
}

Verdict gauge_round_trip() {
  const Grid g = make_grid(1024, 64.0);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Field u = random_decaying_field(g, seed);
    for (double lambda : {-2.0, 1.0, 5.0}) {
      const double err = lp_norm(gauge_inverse(gauge_forward(u, lambda), lambda) - u, 2.0) / lp_norm(u, 2.0);
      worst = std::max(worst, err);
    }
  }
  return {worst <= 1e-10, fmt("300 round trips, worst relative L2 error %.3e (limit 1e-10)", worst)};
}

Verdict constraint_propagation() {
  const Grid g = make_grid(1024, 64.0);
  const double T = 0.5;
  const Field phi0 = gauge_forward(gaussian(g, 0.5, 1.0), 1.0);
  const auto coarse = constraint_propagation_experiment(phi0, 1.0, T, 512, split(T / 512));
  const auto fine = constraint_propagation_experiment(phi0, 1.0, T, 1024, split(T / 1024));
  const double drop = coarse.max_residual / fine.max_residual;
  return {coarse.max_residual <= 1e-6 && drop >= 3.5,
          fmt("residual %.3e at M=512, %.3e at M=1024, drop %.2fx (need <= 1e-6, >= 3.5x)",
              coarse.max_residual, fine.max_residual, drop)};
}

Verdict picard_agreement() {
  const Grid g = make_grid(256, 32.0);
  const double lambda = 1.0, T = 0.1;
  const Index M = 256;
  const Field phi0 = gauge_forward(gaussian(g, 0.5, 1.0), lambda);
  const Field psi0 = constraint_map(phi0, lambda);
  PicardConfig pc;
  pc.lambda = lambda;
  pc.T = T;
  pc.time_steps = M;
  const PicardSolution sol = picard_solve(phi0, psi0, pc);
  const auto stepped = evolve_system(phi0, psi0, lambda, T, M, split(T / M / 4.0));
  const double diff = max_slice_distance(sol.phi, stepped.first);
  const double ratio = sol.diagnostics.contraction_ratio;
  return {diff <= 1e-6 && ratio < 1.0,
          fmt("L^inf_T L^2 difference %.3e (limit 1e-6), contraction ratio %.3f after %d iterations", diff,
              ratio, sol.diagnostics.iterations)};
}

Verdict persistence() {
  const double T = 0.5;
  const Index M = 250;
  bool ok = true;
  double worst_gap = 0.0, worst_growth = 0.0;
  for (double r : {0.25, 0.5, 1.0}) {
    for (double lambda : {1.0, -1.0}) {
      std::vector<PersistenceResult> runs;
      for (Index n : {1024, 2048}) {
        const Grid g = make_grid(n, 64.0);
        runs.push_back(persistence_experiment(gaussian(g, 0.5, 1.0), lambda, r, T, M, ifrk4(1e-3)));
      }
      for (const auto& run : runs) {
        ok = ok && run.success;
        for (std::size_t m = 0; m < run.report.size(); ++m) {
          worst_growth = std::max({worst_growth, run.report.h2[m] / run.initial_h2,
                                   run.report.weighted_r[m] / run.initial_weighted});
        }
      }
      worst_gap = std::max({worst_gap, max_relative_gap(runs[0].report.h2, runs[1].report.h2),
                            max_relative_gap(runs[0].report.weighted_r, runs[1].report.weighted_r)});
    }
  }
  ok = ok && worst_gap <= 1e-4;
  return {ok, fmt("6 runs, max growth %.3fx (limit 10x), n=1024 vs 2048 relative gap %.3e (limit 1e-4)",
                  worst_growth, worst_gap)};
}

Verdict plane_wave() {
  // u = A e^{i(kx - wt)} solves the equation iff w = k^2 - lambda A^2 k (checked by substitution below)
  const double A = 0.5;
  const int mode = 2;
  const Grid g = make_grid(64, 2.0 * pi);
  const double k = 2.0 * pi * mode / g.length();
  double substitution = 0.0, err = 0.0;
  for (double lambda : {1.0, -1.0}) {
    const double w = k * k - lambda * A * A * k;
    auto u = [&](double x, double t) { return A * std::polar(1.0, k * x - w * t); };
    auto cubic = [&](double x, double t) { return std::norm(u(x, t)) * u(x, t); };
    const double h = 1e-4, x = 0.7, t = 0.3;
    const Complex ut = (u(x, t + h) - u(x, t - h)) / (2 * h);
    const Complex uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
    const Complex nx = (cubic(x + h, t) - cubic(x - h, t)) / (2 * h);
    substitution = std::max(substitution, std::abs(Complex(0, 1) * ut + uxx - Complex(0, lambda) * nx));

    const Field u0 = Field::sample(g, [&](double x0) { return u(x0, 0.0); });
    const SpaceTimeField sol = evolve_dnls(u0, lambda, 1.0, 20, ifrk4(1e-3));
    for (Index m = 0; m <= sol.steps(); ++m) {
      const Field exact = Field::sample(g, [&](double x0) { return u(x0, sol.time(m)); });
      err = std::max(err, (sol[m].values() - exact.values()).cwiseAbs().maxCoeff());
    }
  }
  return {err <= 1e-8 && substitution < 1e-6,
          fmt("max error %.3e over T=1 (limit 1e-8), substitution residual %.1e", err, substitution)};
}

Verdict mass_conservation() {
  const Grid g = make_grid(1024, 64.0);
  const Field u0 = gaussian(g, 0.5, 1.0);
  const SpaceTimeField u = evolve_dnls(u0, 1.0, 1.0, 100, ifrk4(1e-3));
  const double m0 = std::pow(lp_norm(u0, 2.0), 2);
  double drift = 0.0;
  for (const auto& s : u.slices()) drift = std::max(drift, std::abs(std::pow(lp_norm(s, 2.0), 2) - m0));
  return {drift <= 1e-8, fmt("max |mass(t) - mass(0)| = %.3e over T=1 (limit 1e-8)", drift)};
}

Verdict strichartz_suites() {
  const Grid coarse = make_grid(256, 32.0);
  const Grid fine = make_grid(512, 32.0);
  const double T = 0.5;
  const Index steps = 64, trials = 100;
  const std::uint64_t seed = 42;
  const std::vector<StrichartzPair> pairs{{kInfinity, 4.0}, {2.0, kInfinity}, {4.0, 8.0}};
  double worst = 0.0;
  std::string worst_case;
  auto record = [&](const std::string& name, const EnsembleSummary& a, const EnsembleSummary& b) {
    const double c = relative_change(a.max_ratio, b.max_ratio);
    if (c >= worst) {
      worst = c;
      worst_case = name;
    }
  };
  for (const auto& p : pairs) {
    record("homogeneous " + p.label(), strichartz_ensemble(coarse, p, trials, seed, T, steps),
           strichartz_ensemble(fine, p, trials, seed, T, steps));
    record("inhomogeneous " + p.label(), inhomogeneous_strichartz_ensemble(coarse, p, p, trials, seed, T, steps),
           inhomogeneous_strichartz_ensemble(fine, p, p, trials, seed, T, steps));
  }
  for (double r : {0.25, 0.5, 0.75}) {
    record(fmt("weighted r=%.2f", r), weighted_semigroup_ensemble(coarse, r, T, trials, seed),
           weighted_semigroup_ensemble(fine, r, T, trials, seed));
  }
  return {worst <= 0.10, fmt("9 ensembles of %d trials, worst max-ratio change n=256->512 %.3f%% (%s; limit 10%%)",
                             int(trials), 100.0 * worst, worst_case.c_str())};
}

Verdict approximation_sequence() {
  const Grid g = make_grid(256, 32.0);
  const double T = 0.1;
  const Index M = 64;
  const auto table = approximation_sequence_experiment(gaussian(g, 0.5, 0.5), 1.0, 0.5, T, M, 5, split(T / M));
  const bool ok = table.resolved_pairs >= 3 && table.cauchy && table.ratio_spread <= 5.0;
  return {ok, fmt("%d levels, %d resolved consecutive distances, strictly decreasing: %s, ratio max/min %.3f "
                  "(limit 5)",
                  int(table.levels.size()), int(table.resolved_pairs), table.cauchy ? "yes" : "no",
                  table.ratio_spread)};
}

Verdict observed_orders() {
  const Grid g = make_grid(128, 32.0);
  const Field u0 = gaussian(g, 0.5, 1.0);
  const OrderResult s = observed_order(Scheme::splitstep_system, {gauge_forward(u0, 1.0), 1.0, 1.0, 0.05});
  const OrderResult k = observed_order(Scheme::ifrk4_dnls, {u0, 1.0, 1.0, 0.05});
  const bool ok = !s.skipped && !k.skipped && std::abs(s.order - 2.0) <= 0.2 && std::abs(k.order - 4.0) <= 0.3;
  return {ok, fmt("split-step %.3f (2 +/- 0.2), IF-RK4 %.3f (4 +/- 0.3)", s.order, k.order)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "dnls_lab_acceptance";
  fs::remove_all(root);
  RunConfig c;
  c.grid = {256, 32.0};
  c.time = {0.1, 32};
  c.data.kind = DataKind::random;
  int compared = 0, identical = 0;
  for (Experiment e : {Experiment::persistence, Experiment::constraint, Experiment::strichartz,
                       Experiment::approx_sequence}) {
    c.experiment = e;
    std::string csv[2];
    for (int rep = 0; rep < 2; ++rep) {
      RunOptions o;
      o.out_dir = (root / std::to_string(rep)).string();
      o.quiet = true;
      const RunOutcome out = run(c, o);
      if (out.exit_code == kExitSolverError) return {false, to_string(e) + ": " + out.message};
      csv[rep] = slurp(fs::path(*o.out_dir) / (artifact_stem(c) + ".csv"));
    }
    ++compared;
    identical += (!csv[0].empty() && csv[0] == csv[1]);
  }
  fs::remove_all(root);
  return {identical == compared, fmt("%d of %d experiments produced byte-identical CSVs on rerun", identical, compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"gauge round trip", gauge_round_trip},
      {"constraint propagation", constraint_propagation},
      {"Picard vs split-step agreement", picard_agreement},
      {"persistence of H2 and weighted norms", persistence},
      {"plane-wave exact solution", plane_wave},
      {"mass conservation", mass_conservation},
      {"Strichartz, inhomogeneous and weighted suites", strichartz_suites},
      {"approximation sequence", approximation_sequence},
      {"observed orders", observed_orders},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("[%s] %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
