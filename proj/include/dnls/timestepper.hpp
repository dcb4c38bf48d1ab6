#pragma once

// Direct time integrators used as independent oracles for the Picard solver:
//
//  * ifrk4_dnls: integrating-factor RK4 on  i u_t + u_xx = i lambda (|u|^2 u)_x,
//    linear flow exact in Fourier space.
//  * splitstep_system: Strang splitting on the gauged system
//        i phi_t + phi_xx = -i lambda phi^2 conj(psi)
//        i psi_t + psi_xx =  i lambda psi^2 conj(phi)
//    with the pointwise cubic ODE advanced by classical RK4.

#include "dnls/norms.hpp"
#include "dnls/spectral.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

namespace dnls {

enum class Scheme { ifrk4_dnls, splitstep_system };

std::string to_string(Scheme s);

struct StepperParams {
  double dt = 1e-3;
  Scheme scheme = Scheme::ifrk4_dnls;
  bool dealias = true;  // 2/3 rule on cubic terms
};

/// Raised when the sup norm grows past 100x its initial value.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(const std::string& what, double time, double growth)
      : std::runtime_error(what), time_(time), growth_(growth) {}
  double time() const { return time_; }
  double growth() const { return growth_; }

 private:
  double time_;
  double growth_;
};

/// Largest dt accepted for given data: keeps dt * (explicit nonlinear rate)
/// inside the RK4 stability region on the imaginary axis.
double max_stable_dt(Scheme scheme, double lambda, double sup_amplitude, const Grid& grid);

/// Evolves DNLS to time T, storing `slices` + 1 uniformly spaced snapshots.
/// The step actually taken is T / (slices * k) for the smallest integer k
/// with T / (slices * k) <= p.dt. Negative T integrates backwards.
SpaceTimeField evolve_dnls(const Field& u0, double lambda, double T, Index slices,
                           const StepperParams& p);

/// Evolves the NLS system by Strang splitting (scheme field of p is ignored).
std::pair<SpaceTimeField, SpaceTimeField> evolve_system(const Field& phi0, const Field& psi0,
                                                        double lambda, double T, Index slices,
                                                        const StepperParams& p);

/// One IF-RK4 step of size dt (may be negative).
Field ifrk4_step(const Field& u, double lambda, double dt, bool dealias);

/// One Strang step of size dt.
std::pair<Field, Field> strang_step(const Field& phi, const Field& psi, double lambda, double dt,
                                    bool dealias);

/// Convergence-order probe: runs dt, dt/2, dt/4 against a dt/16 reference.
struct OrderProblem {
  Field initial;  // u0 for DNLS, phi0 for the system (psi0 = constraint_map)
  double lambda = 1.0;
  double T = 1.0;
  double dt = 0.05;
};

struct OrderResult {
  double order = 0.0;
  std::array<double, 3> errors{};  // final-time L^2 error for dt, dt/2, dt/4
  bool skipped = false;            // errors at roundoff level, order meaningless
};

OrderResult observed_order(Scheme scheme, const OrderProblem& problem);

}  // namespace dnls
