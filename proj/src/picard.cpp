#include "dnls/picard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dnls {

using Complex = std::complex<double>;
using CVec = ComplexVector<double>;

void PicardConfig::validate() const {
  if (max_iter < 1) throw std::invalid_argument("picard: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("picard: tol must be > 0");
  if (time_steps < 2) throw std::invalid_argument("picard: time_steps must be >= 2");
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("picard: r must be in (0, 1]");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("picard: T must be > 0");
  if (!std::isfinite(lambda)) throw std::invalid_argument("picard: lambda must be finite");
}

nlohmann::json ContractionDiagnostics::to_json() const {
  return {{"a_estimate", a_estimate},
          {"iterate_distances", iterate_distances},
          {"contraction_ratio", contraction_ratio},
          {"iterations", iterations},
          {"horizon", horizon}};
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CVec phase(const Grid& g, double t) {
  CVec e(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    const double xi = g.wavenumber(k);
    e[k] = std::polar(1.0, -t * xi * xi);
  }
  return e;
}

// Nonlinear slices phi^2 conj(psi) and -psi^2 conj(phi).
std::pair<SpaceTimeField, SpaceTimeField> cubic_terms(const SpaceTimeField& phi,
                                                      const SpaceTimeField& psi) {
  phi.require_same_mesh(psi);
  std::vector<Field> a;
  std::vector<Field> b;
  a.reserve(phi.slices().size());
  b.reserve(phi.slices().size());
  for (Index m = 0; m <= phi.steps(); ++m) {
    const auto& p = phi[m].values().array();
    const auto& q = psi[m].values().array();
    a.emplace_back(phi.grid(), (p.square() * q.conjugate()).matrix());
    b.emplace_back(phi.grid(), (-q.square() * p.conjugate()).matrix());
  }
  return {SpaceTimeField(phi.horizon(), std::move(a)), SpaceTimeField(phi.horizon(), std::move(b))};
}

SpaceTimeField add_scaled(const SpaceTimeField& base, const SpaceTimeField& inc, Complex c) {
  std::vector<Field> out;
  out.reserve(base.slices().size());
  for (Index m = 0; m <= base.steps(); ++m) out.push_back(base[m] + c * inc[m]);
  return SpaceTimeField(base.horizon(), std::move(out));
}

struct FreePair {
  SpaceTimeField phi;
  SpaceTimeField psi;
};

std::pair<SpaceTimeField, SpaceTimeField> apply_map(const SpaceTimeField& phi,
                                                    const SpaceTimeField& psi, const FreePair& free,
                                                    double lambda) {
  if (lambda == 0.0) return {free.phi, free.psi};
  const auto [n_phi, n_psi] = cubic_terms(phi, psi);
  // i u_t + u_xx = F integrates to u = e^{it d^2} u0 - i int e^{i(t-t') d^2} F, and
  // F = -i lambda phi^2 conj(psi) (resp. +i lambda psi^2 conj(phi)) gives -lambda.
  const Complex c(-lambda, 0.0);
  auto next_phi = add_scaled(free.phi, duhamel_family(n_phi), c);
  auto next_psi = add_scaled(free.psi, duhamel_family(n_psi), c);
  // The Duhamel term vanishes at t = 0; keep the data bit-exact there.
  next_phi[0] = free.phi[0];
  next_psi[0] = free.psi[0];
  return {std::move(next_phi), std::move(next_psi)};
}

bool finite(const SpaceTimeField& F) {
  return std::all_of(F.slices().begin(), F.slices().end(),
                     [](const Field& f) { return f.all_finite(); });
}

}  // namespace

SpaceTimeField free_evolution(const Field& f, double T, Index steps) {
  if (steps < 1) throw std::invalid_argument("free_evolution: steps must be >= 1");
  const Grid& g = f.grid();
  const CVec hat = detail::raw_forward<double>(f.values());
  const double dt = T / double(steps);
  std::vector<Field> out;
  out.reserve(steps + 1);
  out.push_back(f);
  for (Index m = 1; m <= steps; ++m) {
    out.emplace_back(g, detail::raw_inverse<double>(hat.cwiseProduct(phase(g, dt * double(m)))));
  }
  return SpaceTimeField(T, std::move(out));
}

Field duhamel_integral(const SpaceTimeField& F, Index t_index, double dispersion) {
  if (t_index < 0 || t_index > F.steps()) {
    throw std::out_of_range("duhamel_integral: t_index outside [0, M]");
  }
  const Grid& g = F.grid();
  if (t_index == 0) return Field(g);
  const double dt = F.time_step();
  CVec acc = CVec::Zero(g.size());
  for (Index j = 0; j <= t_index; ++j) {
    const double w = (j == 0 || j == t_index) ? 0.5 * dt : dt;
    const double lag = dispersion * dt * double(t_index - j);
    acc += w * detail::raw_forward<double>(F[j].values()).cwiseProduct(phase(g, lag));
  }
  return Field(g, detail::raw_inverse<double>(acc));
}

SpaceTimeField duhamel_family(const SpaceTimeField& F, double dispersion) {
  const Grid& g = F.grid();
  const double dt = F.time_step();
  const CVec step = phase(g, dispersion * dt);
  std::vector<Field> out;
  out.reserve(F.slices().size());
  out.emplace_back(g);
  CVec acc = CVec::Zero(g.size());
  CVec prev = detail::raw_forward<double>(F[0].values());
  for (Index m = 1; m <= F.steps(); ++m) {
    const CVec cur = detail::raw_forward<double>(F[m].values());
    acc = (acc + 0.5 * dt * prev).cwiseProduct(step) + 0.5 * dt * cur;
    out.emplace_back(g, detail::raw_inverse<double>(acc));
    prev = cur;
  }
  return SpaceTimeField(F.horizon(), std::move(out));
}

std::pair<SpaceTimeField, SpaceTimeField> phi_map(const SpaceTimeField& phi,
                                                  const SpaceTimeField& psi, const Field& phi0,
                                                  const Field& psi0, double lambda) {
  phi.require_same_mesh(psi);
  phi[0].require_same_grid(phi0);
  phi0.require_same_grid(psi0);
  const FreePair free{free_evolution(phi0, phi.horizon(), phi.steps()),
                      free_evolution(psi0, phi.horizon(), phi.steps())};
  return apply_map(phi, psi, free, lambda);
}

PicardSolution picard_solve(const Field& phi0, const Field& psi0, const PicardConfig& config,
                            PicardSeed seed) {
  config.validate();
  phi0.require_same_grid(psi0);
  const double r = config.r;
  const FreePair free{free_evolution(phi0, config.T, config.time_steps),
                      free_evolution(psi0, config.T, config.time_steps)};

  ContractionDiagnostics diag;
  diag.horizon = config.T;
  diag.a_estimate = sobolev_norm(phi0, 2.0) + sobolev_norm(psi0, 2.0) + weighted_norm(phi0, r) +
                    weighted_norm(psi0, r);

  SpaceTimeField phi = free.phi;
  SpaceTimeField psi = free.psi;
  if (seed == PicardSeed::zero) {
    phi = SpaceTimeField::zeros(phi0.grid(), config.T, config.time_steps);
    psi = SpaceTimeField::zeros(phi0.grid(), config.T, config.time_steps);
  }

  for (int k = 0; k < config.max_iter; ++k) {
    auto [next_phi, next_psi] = apply_map(phi, psi, free, config.lambda);
    diag.iterations = k + 1;
    if (!finite(next_phi) || !finite(next_psi)) {
      diag.contraction_ratio = std::numeric_limits<double>::infinity();
      throw NonConvergence("picard: iterates became non-finite after " +
                               std::to_string(k + 1) + " iterations",
                           diag);
    }
    const double d = x_norm(next_phi - phi, r) + x_norm(next_psi - psi, r);
    if (!diag.iterate_distances.empty() && diag.iterate_distances.back() > 0.0) {
      diag.contraction_ratio = std::max(diag.contraction_ratio, d / diag.iterate_distances.back());
    }
    diag.iterate_distances.push_back(d);
    phi = std::move(next_phi);
    psi = std::move(next_psi);

    if (!std::isfinite(d)) {
      diag.contraction_ratio = std::numeric_limits<double>::infinity();
      throw NonConvergence("picard: iterate distance not finite", diag);
    }
    if (d <= config.tol) return {std::move(phi), std::move(psi), std::move(diag)};
    // Runaway growth: no contraction can recover from here.
    if (k >= 2 && d > 1e8 * std::max(diag.iterate_distances.front(), config.tol)) {
      throw NonConvergence("picard: iterates diverging (d_k = " + sci(d) + ")", diag);
    }
  }
  throw NonConvergence("picard: no convergence within " + std::to_string(config.max_iter) +
                           " iterations (ratio " + sci(diag.contraction_ratio) + ")",
                       diag);
}

AdaptiveResult adaptive_horizon(const Field& phi0, const Field& psi0, const PicardConfig& config) {
  constexpr int kMaxHalvings = 10;
  PicardConfig trial = config;
  for (int h = 0;; ++h) {
    try {
      return {picard_solve(phi0, psi0, trial), trial.T, h};
    } catch (const NonConvergence&) {
      if (h == kMaxHalvings) throw;
    }
    trial.T *= 0.5;
  }
}

double system_residual(const SpaceTimeField& phi, const SpaceTimeField& psi, double lambda) {
  phi.require_same_mesh(psi);
  const double dt = phi.time_step();
  const Complex i(0.0, 1.0);
  double worst = 0.0;
  for (Index m = 1; m < phi.steps(); ++m) {
    const auto& p = phi[m].values().array();
    const auto& q = psi[m].values().array();
    const CVec dphi = (phi[m + 1].values() - phi[m - 1].values()) / (2.0 * dt);
    const CVec dpsi = (psi[m + 1].values() - psi[m - 1].values()) / (2.0 * dt);
    const CVec res_phi = i * dphi + spatial_derivative(phi[m], 2).values() +
                         (i * lambda * p.square() * q.conjugate()).matrix();
    const CVec res_psi = i * dpsi + spatial_derivative(psi[m], 2).values() -
                         (i * lambda * q.square() * p.conjugate()).matrix();
    worst = std::max({worst, lp_norm(Field(phi.grid(), res_phi), 2.0),
                      lp_norm(Field(phi.grid(), res_psi), 2.0)});
  }
  return worst;
}

}  // namespace dnls
