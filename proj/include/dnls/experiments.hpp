#pragma once

// Desk-scale verification experiments: persistence of H^2 and weighted norms
// under DNLS, constraint propagation for the gauged system, Strichartz-type
// inequalities checked as refinement-stable ratios, and the approximating
// sequence used to build DNLS solutions from smooth data.

#include "dnls/norms.hpp"
#include "dnls/report.hpp"
#include "dnls/spectral.hpp"
#include "dnls/timestepper.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dnls {

// ---------------------------------------------------------------------------
// Test data

/// e^{-x^2 / (2 w^2)} P(x / w) with P a degree-`degree` polynomial whose
/// coefficients are seeded standard complex normals, scaled to unit L^2 norm
/// on the continuum. Defined pointwise, so refining the grid samples the same
/// function.
Field random_decaying_field(const Grid& grid, std::uint64_t seed, double width = 1.0,
                            int degree = 3);

/// sum_{j<2} f_j(x) a_j(t) with f_j random decaying fields and a_j(t) random
/// smooth oscillating profiles.
SpaceTimeField random_space_time_field(const Grid& grid, std::uint64_t seed, double T, Index steps);

Field gaussian(const Grid& grid, double amplitude, double width, double center = 0.0);

/// Cyclic shift by `cells` grid cells.
Field translate(const Field& f, Index cells);

// ---------------------------------------------------------------------------
// Inequality reports

/// Exponent pair (p, q) with 2 <= p <= inf and 2/q = 1/2 - 1/p.
class StrichartzPair {
 public:
  StrichartzPair(double p, double q);
  double p() const { return p_; }
  double q() const { return q_; }
  /// Hoelder conjugates (p', q').
  double p_conjugate() const;
  double q_conjugate() const;
  std::string label() const;

 private:
  double p_;
  double q_;
};

double conjugate_exponent(double p);

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double rhs_total = 0.0;
  double ratio = 0.0;  // lhs / rhs_total, 0 when both vanish
  // trial metadata
  Index n_points = 0;
  double box_length = 0.0;
  std::uint64_t seed = 0;
  double time = 0.0;
  double p = 0.0;
  double q = 0.0;

  nlohmann::json to_json() const;
};

/// (int_0^T ||e^{it d^2} f||_{L^p}^q dt)^{1/q} against ||f||_{L^2}.
InequalityReport check_strichartz(const Field& f, const StrichartzPair& pair, double T, Index steps);

/// || int_0^t e^{i(t-t') d^2} F dt' ||_{L^{q1}_T L^{p1}_x} against ||F||_{L^{q0'}_T L^{p0'}_x}.
InequalityReport check_inhomogeneous_strichartz(const SpaceTimeField& F, const StrichartzPair& pair0,
                                                const StrichartzPair& pair1);

/// || |x|^r e^{it d^2} f || against t^{r/2}||f|| + t^r ||D^r f|| + || |x|^r f ||, r in (0,1).
InequalityReport check_weighted_semigroup(const Field& f, double r, double t);

/// The same three right-hand terms without the r < 1 restriction.
InequalityReport weighted_semigroup_terms(const Field& f, double r, double t);

struct EnsembleSummary {
  std::vector<InequalityReport> trials;
  double max_ratio = 0.0;
};

/// Trials use seeds seed, seed+1, ...; evaluated in parallel, ordered by trial.
EnsembleSummary strichartz_ensemble(const Grid& grid, const StrichartzPair& pair, Index trials,
                                    std::uint64_t seed, double T, Index steps);
EnsembleSummary inhomogeneous_strichartz_ensemble(const Grid& grid, const StrichartzPair& pair0,
                                                  const StrichartzPair& pair1, Index trials,
                                                  std::uint64_t seed, double T, Index steps);
EnsembleSummary weighted_semigroup_ensemble(const Grid& grid, double r, double t, Index trials,
                                            std::uint64_t seed);

/// |a - b| / max(|a|, |b|); 0 when both vanish.
double relative_change(double a, double b);

// ---------------------------------------------------------------------------
// Evolution experiments

struct PersistenceResult {
  NormReport report;
  bool success = false;
  double initial_h2 = 0.0;
  double initial_weighted = 0.0;
  std::vector<std::string> warnings;
};

/// Evolves u0 under DNLS and records H^2 and weighted norms per slice.
/// Success: every value finite and at most 10x its initial value.
PersistenceResult persistence_experiment(const Field& u0, double lambda, double r, double T,
                                         Index steps, const StepperParams& params);

struct ConstraintResult {
  std::vector<double> times;
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool constrained = false;  // max_residual <= kConstraintTolerance
  NormReport report;         // of phi, with the residual column filled
};

inline constexpr double kConstraintTolerance = 1e-6;

/// Evolves (phi0, psi0) by the split-step scheme and tracks the constraint
/// residual. psi0 defaults to constraint_map(phi0, lambda).
ConstraintResult constraint_propagation_experiment(const Field& phi0, double lambda, double T,
                                                   Index steps, const StepperParams& params,
                                                   const std::optional<Field>& psi0 = std::nullopt,
                                                   double r = 0.5);

struct ApproxLevel {
  double cutoff_fraction = 0.0;
  double rho = 0.0;  // ||phi0_n||_H1 + ||psi0_n||_H1 + || |x|^r phi0_n ||
};

struct ApproxPair {
  double lhs = 0.0;  // x_norm of u_n - u_{n+1}
  double rhs = 0.0;  // ||phi0_n - phi0_{n+1}||_H2 + || |x|^r (phi0_n - phi0_{n+1}) ||
  double ratio = 0.0;
  bool resolved = true;  // rhs above the roundoff floor kApproxNoiseFloor * rho_max
};

inline constexpr double kApproxNoiseFloor = 1e-10;

struct ApproxSequenceTable {
  std::vector<ApproxLevel> levels;
  std::vector<ApproxPair> pairs;
  double rho_max = 0.0;
  bool cauchy = false;        // lhs strictly decreasing across resolved pairs
  double ratio_spread = 0.0;  // max ratio / min ratio over resolved pairs
  Index resolved_pairs = 0;
};

/// Low-passes phi0 = gauge_forward(u0) at cutoff fractions 2^{-(levels-1)}, ..., 1/2, 1,
/// builds constrained psi0 per level, evolves the system and maps back to u.
ApproxSequenceTable approximation_sequence_experiment(const Field& u0, double lambda, double r,
                                                      double T, Index steps, Index n_levels,
                                                      const StepperParams& params);

struct LipschitzReport {
  double lhs = 0.0;  // solution_composite of the differences
  double rhs = 0.0;  // data_composite of the differences
  double ratio = 0.0;
};

LipschitzReport lipschitz_data_experiment(const Field& phi0, const Field& phi0_tilde, double lambda,
                                          double r, double T, Index steps,
                                          const StepperParams& params);

}  // namespace dnls
