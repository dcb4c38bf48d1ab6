#include "dnls/timestepper.hpp"

#include "dnls/gauge.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace dnls {

using Complex = std::complex<double>;
using CVec = ComplexVector<double>;

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ifrk4_dnls: return "ifrk4_dnls";
    case Scheme::splitstep_system: return "splitstep_system";
  }
  return "unknown";
}

namespace {

constexpr double kRk4ImaginaryAxisLimit = 2.8;
constexpr double kBlowUpFactor = 100.0;

// 1 on retained modes, 0 above 2/3 of the max wavenumber when dealiasing.
Eigen::VectorXd dealias_mask(const Grid& g, bool dealias) {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(g.size());
  if (!dealias) return mask;
  const double cutoff = (2.0 / 3.0) * g.max_frequency();
  for (Index k = 0; k < g.size(); ++k) {
    if (std::abs(g.wavenumber(k)) > cutoff) mask[k] = 0.0;
  }
  return mask;
}

// Fourier-space DNLS right-hand side without the linear part:
// lambda * (i xi) * P FFT(|u|^2 u), Nyquist slot dropped.
class DnlsNonlinearity {
 public:
  DnlsNonlinearity(const Grid& g, double lambda, bool dealias) : grid_(g) {
    symbol_.resize(g.size());
    const Eigen::VectorXd mask = dealias_mask(g, dealias);
    for (Index k = 0; k < g.size(); ++k) {
      symbol_[k] = k == g.nyquist_index() ? Complex(0)
                                          : lambda * Complex(0, g.wavenumber(k)) * mask[k];
    }
  }

  CVec operator()(const CVec& hat) const {
    CVec u = detail::raw_inverse<double>(hat);
    u.array() *= u.array().abs2();
    CVec out = detail::raw_forward<double>(u);
    return out.cwiseProduct(symbol_);
  }

 private:
  Grid grid_;
  CVec symbol_;
};

CVec linear_phase(const Grid& g, double dt) {
  CVec e(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    const double xi = g.wavenumber(k);
    e[k] = std::polar(1.0, -dt * xi * xi);
  }
  return e;
}

// Lawson (integrating factor) RK4 in Fourier space.
class IfRk4 {
 public:
  IfRk4(const Grid& g, double lambda, double dt, bool dealias)
      : nonlinear_(g, lambda, dealias), half_(linear_phase(g, 0.5 * dt)),
        full_(linear_phase(g, dt)), dt_(dt) {}

  void step(CVec& hat) const {
    const CVec k1 = nonlinear_(hat);
    const CVec k2 = nonlinear_(half_.cwiseProduct(hat + 0.5 * dt_ * k1));
    const CVec k3 = nonlinear_(half_.cwiseProduct(hat) + 0.5 * dt_ * k2);
    const CVec k4 = nonlinear_(full_.cwiseProduct(hat) + dt_ * half_.cwiseProduct(k3));
    hat = full_.cwiseProduct(hat) +
          (dt_ / 6.0) * (full_.cwiseProduct(k1) + 2.0 * half_.cwiseProduct(k2 + k3) + k4);
  }

 private:
  DnlsNonlinearity nonlinear_;
  CVec half_;
  CVec full_;
  double dt_;
};

// Strang step on the system; phases and mask are precomputed per run.
class StrangSplitting {
 public:
  StrangSplitting(const Grid& g, double lambda, double dt, bool dealias)
      : grid_(g), lambda_(lambda), dt_(dt), half_(linear_phase(g, 0.5 * dt)),
        mask_(dealias_mask(g, dealias)), dealias_(dealias) {}

  void step(CVec& phi, CVec& psi) const {
    linear(phi);
    linear(psi);
    nonlinear(phi, psi);
    linear(phi);
    linear(psi);
  }

 private:
  void linear(CVec& v) const {
    CVec hat = detail::raw_forward<double>(v);
    v = detail::raw_inverse<double>(hat.cwiseProduct(half_));
  }

  // d/dt phi = -lambda phi^2 conj(psi),  d/dt psi = lambda psi^2 conj(phi).
  void rhs(const CVec& phi, const CVec& psi, CVec& dphi, CVec& dpsi) const {
    dphi = -lambda_ * (phi.array().square() * psi.array().conjugate()).matrix();
    dpsi = lambda_ * (psi.array().square() * phi.array().conjugate()).matrix();
  }

  void nonlinear(CVec& phi, CVec& psi) const {
    if (lambda_ == 0.0) return;
    const Index n = phi.size();
    CVec a1(n), b1(n), a2(n), b2(n), a3(n), b3(n), a4(n), b4(n);
    rhs(phi, psi, a1, b1);
    rhs(phi + 0.5 * dt_ * a1, psi + 0.5 * dt_ * b1, a2, b2);
    rhs(phi + 0.5 * dt_ * a2, psi + 0.5 * dt_ * b2, a3, b3);
    rhs(phi + dt_ * a3, psi + dt_ * b3, a4, b4);
    CVec dphi = (dt_ / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    CVec dpsi = (dt_ / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    if (dealias_) {
      dphi = detail::raw_inverse<double>(detail::raw_forward<double>(dphi).cwiseProduct(mask_.cast<Complex>()));
      dpsi = detail::raw_inverse<double>(detail::raw_forward<double>(dpsi).cwiseProduct(mask_.cast<Complex>()));
    }
    phi += dphi;
    psi += dpsi;
  }

  Grid grid_;
  double lambda_;
  double dt_;
  CVec half_;
  Eigen::VectorXd mask_;
  bool dealias_;
};

struct StepPlan {
  Index steps_per_slice;
  double dt;
};

StepPlan plan_steps(double T, Index slices, double max_dt) {
  if (slices < 1) throw std::invalid_argument("evolve: need at least one time slice");
  if (!(max_dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (max_dt > std::abs(T) && T != 0.0) throw std::invalid_argument("evolve: dt must not exceed T");
  const double slice_dt = std::abs(T) / double(slices);
  Index k = std::max<Index>(1, static_cast<Index>(std::ceil(slice_dt / max_dt - 1e-9)));
  return {k, T / double(slices * k)};
}

double sup_abs(const CVec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void check_growth(double sup0, double sup, double t) {
  if (!std::isfinite(sup)) {
    throw BlowUp("evolve: non-finite values at t = " + std::to_string(t), t,
                 std::numeric_limits<double>::infinity());
  }
  if (sup0 > 0.0 && sup > kBlowUpFactor * sup0) {
    throw BlowUp("evolve: sup norm grew " + std::to_string(sup / sup0) + "x by t = " +
                     std::to_string(t),
                 t, sup / sup0);
  }
}

void check_stability(Scheme scheme, double lambda, double sup, const Grid& g, double dt) {
  const double limit = max_stable_dt(scheme, lambda, sup, g);
  if (std::abs(dt) > limit) {
    throw std::invalid_argument("evolve: step " + std::to_string(std::abs(dt)) +
                                " exceeds the stability guard " + std::to_string(limit));
  }
}

}  // namespace

double max_stable_dt(Scheme scheme, double lambda, double sup_amplitude, const Grid& grid) {
  double rate = 3.0 * std::abs(lambda) * sup_amplitude * sup_amplitude;
  if (scheme == Scheme::ifrk4_dnls) rate *= grid.max_frequency();
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return kRk4ImaginaryAxisLimit / rate;
}

Field ifrk4_step(const Field& u, double lambda, double dt, bool dealias) {
  IfRk4 stepper(u.grid(), lambda, dt, dealias);
  CVec hat = detail::raw_forward<double>(u.values());
  stepper.step(hat);
  return Field(u.grid(), detail::raw_inverse<double>(hat));
}

std::pair<Field, Field> strang_step(const Field& phi, const Field& psi, double lambda, double dt,
                                    bool dealias) {
  phi.require_same_grid(psi);
  StrangSplitting stepper(phi.grid(), lambda, dt, dealias);
  CVec a = phi.values();
  CVec b = psi.values();
  stepper.step(a, b);
  return {Field(phi.grid(), std::move(a)), Field(psi.grid(), std::move(b))};
}

SpaceTimeField evolve_dnls(const Field& u0, double lambda, double T, Index slices,
                           const StepperParams& p) {
  if (!u0.all_finite()) throw std::invalid_argument("evolve_dnls: initial data not finite");
  const StepPlan plan = plan_steps(T, slices, p.dt);
  const Grid& g = u0.grid();
  const double sup0 = sup_abs(u0.values());
  check_stability(Scheme::ifrk4_dnls, lambda, sup0, g, plan.dt);

  IfRk4 stepper(g, lambda, plan.dt, p.dealias);
  std::vector<Field> out;
  out.reserve(slices + 1);
  out.push_back(u0);
  CVec hat = detail::raw_forward<double>(u0.values());
  for (Index m = 1; m <= slices; ++m) {
    for (Index s = 0; s < plan.steps_per_slice; ++s) stepper.step(hat);
    Field u(g, detail::raw_inverse<double>(hat));
    check_growth(sup0, sup_abs(u.values()), T * double(m) / double(slices));
    out.push_back(std::move(u));
  }
  return SpaceTimeField(std::abs(T), std::move(out));
}

std::pair<SpaceTimeField, SpaceTimeField> evolve_system(const Field& phi0, const Field& psi0,
                                                        double lambda, double T, Index slices,
                                                        const StepperParams& p) {
  phi0.require_same_grid(psi0);
  if (!phi0.all_finite() || !psi0.all_finite()) {
    throw std::invalid_argument("evolve_system: initial data not finite");
  }
  const StepPlan plan = plan_steps(T, slices, p.dt);
  const Grid& g = phi0.grid();
  const double sup0 = std::max(sup_abs(phi0.values()), sup_abs(psi0.values()));
  check_stability(Scheme::splitstep_system, lambda, sup0, g, plan.dt);

  StrangSplitting stepper(g, lambda, plan.dt, p.dealias);
  std::vector<Field> phis{phi0};
  std::vector<Field> psis{psi0};
  phis.reserve(slices + 1);
  psis.reserve(slices + 1);
  CVec a = phi0.values();
  CVec b = psi0.values();
  for (Index m = 1; m <= slices; ++m) {
    for (Index s = 0; s < plan.steps_per_slice; ++s) stepper.step(a, b);
    check_growth(sup0, std::max(sup_abs(a), sup_abs(b)), T * double(m) / double(slices));
    phis.emplace_back(g, a);
    psis.emplace_back(g, b);
  }
  return {SpaceTimeField(std::abs(T), std::move(phis)), SpaceTimeField(std::abs(T), std::move(psis))};
}

OrderResult observed_order(Scheme scheme, const OrderProblem& problem) {
  const double lambda = problem.lambda;
  auto final_state = [&](double dt) -> Field {
    StepperParams p{dt, scheme, true};
    if (scheme == Scheme::ifrk4_dnls) {
      return evolve_dnls(problem.initial, lambda, problem.T, 1, p)[1];
    }
    const Field psi0 = constraint_map(problem.initial, lambda);
    return evolve_system(problem.initial, psi0, lambda, problem.T, 1, p).first[1];
  };

  const Field reference = final_state(problem.dt / 16.0);
  OrderResult result;
  for (int i = 0; i < 3; ++i) {
    const Field approx = final_state(problem.dt / double(1 << i));
    result.errors[i] = lp_norm(approx - reference, 2.0);
  }
  const double scale = std::max(1.0, lp_norm(reference, 2.0));
  if (result.errors[2] < 1e-12 * scale) {
    result.skipped = true;
    result.order = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.order = 0.5 * std::log2(result.errors[0] / result.errors[2]);
  return result;
}

}  // namespace dnls
