#pragma once

// Duhamel integrals and the Banach fixed-point iteration for the cubic NLS
// system
//
//   i phi_t + phi_xx = -i lambda phi^2 conj(psi),   i psi_t + psi_xx = i lambda psi^2 conj(phi),
//
// written in Duhamel form as
//
//   Phi(phi, psi)(t) = e^{it d^2}(phi0, psi0)
//                    - lambda int_0^t e^{i(t-t') d^2} (phi^2 conj(psi), -psi^2 conj(phi))(t') dt' .
//
// Iterates live on the uniform mesh t_m = m T / M; the time integral is the
// composite trapezoid rule over that mesh. Distances between iterates are
// measured in the X_T x X_T norm (see x_norm).

#include "dnls/norms.hpp"
#include "dnls/spectral.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dnls {

struct PicardConfig {
  int max_iter = 100;
  double tol = 1e-10;
  Index time_steps = 256;  // M
  double r = 0.5;
  double lambda = 1.0;
  double T = 0.1;

  void validate() const;
};

struct ContractionDiagnostics {
  double a_estimate = 0.0;               // ||phi0||_H2 + ||psi0||_H2 + weighted data norms (C = 1)
  std::vector<double> iterate_distances;  // d_k = ||Phi^{k+1} - Phi^k||_{X x X}
  double contraction_ratio = 0.0;         // max_k d_{k+1} / d_k
  int iterations = 0;
  double horizon = 0.0;

  nlohmann::json to_json() const;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, ContractionDiagnostics diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const ContractionDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  ContractionDiagnostics diagnostics_;
};

struct PicardSolution {
  SpaceTimeField phi;
  SpaceTimeField psi;
  ContractionDiagnostics diagnostics;
};

/// Free evolution e^{i t_m d^2} f sampled on the mesh of T / steps. Slice 0 is f itself.
SpaceTimeField free_evolution(const Field& f, double T, Index steps);

/// int_0^{t_m} e^{i(t_m - t') dispersion d^2} F(t') dt' by the composite
/// trapezoid rule over the mesh of F. dispersion = 0 removes the propagator.
Field duhamel_integral(const SpaceTimeField& F, Index t_index, double dispersion = 1.0);

/// The same integral at every mesh time, computed by the one-step recursion
///   D_{m+1} = e^{i dt d^2} (D_m + dt/2 F_m) + dt/2 F_{m+1} ,
/// which reproduces the composite trapezoid sums exactly in exact arithmetic.
SpaceTimeField duhamel_family(const SpaceTimeField& F, double dispersion = 1.0);

/// One application of the Duhamel map to the pair (phi, psi).
std::pair<SpaceTimeField, SpaceTimeField> phi_map(const SpaceTimeField& phi,
                                                  const SpaceTimeField& psi, const Field& phi0,
                                                  const Field& psi0, double lambda);

enum class PicardSeed { free_evolution, zero };

/// Iterates Phi from the seed until d_k <= tol; throws NonConvergence after
/// max_iter iterations or as soon as the iterates stop being finite.
PicardSolution picard_solve(const Field& phi0, const Field& psi0, const PicardConfig& config,
                            PicardSeed seed = PicardSeed::free_evolution);

/// Halves T (at most 10 times) until picard_solve converges.
struct AdaptiveResult {
  PicardSolution solution;
  double T_used = 0.0;
  int halvings = 0;
};
AdaptiveResult adaptive_horizon(const Field& phi0, const Field& psi0, const PicardConfig& config);

/// sup_m || i d_t phi + d_x^2 phi + i lambda phi^2 conj(psi) ||_{L^2} over
/// interior slices, with d_t by centered differences.
double system_residual(const SpaceTimeField& phi, const SpaceTimeField& psi, double lambda);

}  // namespace dnls
