#include "dnls/experiments.hpp"

#include "dnls/gauge.hpp"
#include "dnls/parallel.hpp"
#include "dnls/picard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dnls {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Test data

namespace {

// int_R y^k e^{-y^2} dy
double gaussian_moment(int k) {
  if (k % 2 != 0) return 0.0;
  return std::tgamma(0.5 * (k + 1));
}

std::vector<Complex> random_coefficients(std::mt19937_64& rng, int count) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(count);
  for (auto& z : c) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return c;
}

// Field e^{-y^2/2} P(y), y = x / width, with unit continuum L^2 norm.
Field polynomial_gaussian(const Grid& grid, const std::vector<Complex>& c, double width) {
  double norm2 = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      norm2 += (c[j] * std::conj(c[k])).real() * gaussian_moment(int(j + k));
    }
  }
  const double scale = 1.0 / std::sqrt(width * norm2);
  return Field::sample(grid, [&](double x) {
    const double y = x / width;
    Complex p = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * y + *it;
    return scale * std::exp(-0.5 * y * y) * p;
  });
}

}  // namespace

Field random_decaying_field(const Grid& grid, std::uint64_t seed, double width, int degree) {
  if (degree < 0) throw std::invalid_argument("random_decaying_field: degree must be >= 0");
  std::mt19937_64 rng(seed);
  return polynomial_gaussian(grid, random_coefficients(rng, degree + 1), width);
}

SpaceTimeField random_space_time_field(const Grid& grid, std::uint64_t seed, double T, Index steps) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Field f0 = polynomial_gaussian(grid, random_coefficients(rng, 4), 1.0);
  const Field f1 = polynomial_gaussian(grid, random_coefficients(rng, 4), 1.0);
  struct Profile {
    Complex base, slope;
    double omega;
  };
  auto draw = [&] {
    return Profile{Complex(unit(rng), unit(rng)), Complex(unit(rng), unit(rng)),
                   4.0 * std::numbers::pi * unit(rng) / T};
  };
  const Profile a0 = draw();
  const Profile a1 = draw();
  auto value = [T](const Profile& a, double t) {
    return (a.base + a.slope * (t / T)) * std::polar(1.0, a.omega * t);
  };
  std::vector<Field> slices;
  slices.reserve(steps + 1);
  for (Index m = 0; m <= steps; ++m) {
    const double t = T * double(m) / double(steps);
    slices.push_back(value(a0, t) * f0 + value(a1, t) * f1);
  }
  return SpaceTimeField(T, std::move(slices));
}

Field gaussian(const Grid& grid, double amplitude, double width, double center) {
  return Field::sample(grid, [=](double x) {
    const double y = (x - center) / width;
    return amplitude * std::exp(-0.5 * y * y);
  });
}

Field translate(const Field& f, Index cells) {
  const Index n = f.size();
  const Index s = ((cells % n) + n) % n;
  ComplexVector<double> v(n);
  for (Index j = 0; j < n; ++j) v[(j + s) % n] = f[j];
  return Field(f.grid(), std::move(v));
}

// ---------------------------------------------------------------------------
// Inequalities

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("conjugate_exponent: p must be >= 1");
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

StrichartzPair::StrichartzPair(double p, double q) : p_(p), q_(q) {
  if (!(p >= 2.0)) throw std::invalid_argument("strichartz pair: need 2 <= p <= inf");
  if (!(q >= 1.0)) throw std::invalid_argument("strichartz pair: q must be >= 1");
  const double lhs = 2.0 / q;  // 0 for q = inf
  const double rhs = 0.5 - 1.0 / p;
  if (std::abs(lhs - rhs) > 1e-12) {
    throw std::invalid_argument("strichartz pair (" + label() + ") violates 2/q = 1/2 - 1/p");
  }
}

double StrichartzPair::p_conjugate() const { return conjugate_exponent(p_); }
double StrichartzPair::q_conjugate() const { return conjugate_exponent(q_); }

std::string StrichartzPair::label() const {
  auto s = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    std::ostringstream os;
    os << v;
    return os.str();
  };
  return s(p_) + "," + s(q_);
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [k, v] : rhs_terms) terms[k] = v;
  auto num = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  return {{"name", name},     {"lhs", lhs},       {"rhs_terms", terms},
          {"rhs", rhs_total}, {"ratio", ratio},   {"n", n_points},
          {"L", box_length},  {"seed", seed},     {"time", time},
          {"p", num(p)},      {"q", num(q)}};
}

namespace {

void finish(InequalityReport& rep) {
  rep.rhs_total = 0.0;
  for (const auto& [_, v] : rep.rhs_terms) rep.rhs_total += v;
  rep.ratio = rep.rhs_total > 0.0 ? rep.lhs / rep.rhs_total : 0.0;
}

}  // namespace

InequalityReport check_strichartz(const Field& f, const StrichartzPair& pair, double T, Index steps) {
  InequalityReport rep;
  rep.name = "strichartz";
  rep.n_points = f.grid().size();
  rep.box_length = f.grid().length();
  rep.time = T;
  rep.p = pair.p();
  rep.q = pair.q();
  rep.lhs = mixed_norm(free_evolution(f, T, steps), pair.q(), pair.p());
  rep.rhs_terms = {{"l2", lp_norm(f, 2.0)}};
  finish(rep);
  return rep;
}

InequalityReport check_inhomogeneous_strichartz(const SpaceTimeField& F, const StrichartzPair& pair0,
                                                const StrichartzPair& pair1) {
  InequalityReport rep;
  rep.name = "inhomogeneous_strichartz";
  rep.n_points = F.grid().size();
  rep.box_length = F.grid().length();
  rep.time = F.horizon();
  rep.p = pair1.p();
  rep.q = pair1.q();
  rep.lhs = mixed_norm(duhamel_family(F), pair1.q(), pair1.p());
  rep.rhs_terms = {{"dual_mixed", mixed_norm(F, pair0.q_conjugate(), pair0.p_conjugate())}};
  finish(rep);
  return rep;
}

InequalityReport weighted_semigroup_terms(const Field& f, double r, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("weighted semigroup: t must be > 0");
  InequalityReport rep;
  rep.name = "weighted_semigroup";
  rep.n_points = f.grid().size();
  rep.box_length = f.grid().length();
  rep.time = t;
  rep.p = r;
  rep.q = std::numeric_limits<double>::quiet_NaN();
  rep.lhs = weighted_norm(free_propagator(f, t), r);
  rep.rhs_terms = {{"mass", std::pow(t, 0.5 * r) * lp_norm(f, 2.0)},
                   {"fractional", std::pow(t, r) * lp_norm(fractional_derivative(f, r), 2.0)},
                   {"weighted", weighted_norm(f, r)}};
  finish(rep);
  return rep;
}

InequalityReport check_weighted_semigroup(const Field& f, double r, double t) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("weighted semigroup: r must be in (0, 1)");
  return weighted_semigroup_terms(f, r, t);
}

namespace {

template <typename Trial>
EnsembleSummary run_ensemble(Index trials, Trial&& trial) {
  if (trials < 1) throw std::invalid_argument("ensemble: need at least one trial");
  EnsembleSummary out;
  out.trials.resize(trials);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) { out.trials[i] = trial(i); });
  for (const auto& t : out.trials) out.max_ratio = std::max(out.max_ratio, t.ratio);
  return out;
}

}  // namespace

EnsembleSummary strichartz_ensemble(const Grid& grid, const StrichartzPair& pair, Index trials,
                                    std::uint64_t seed, double T, Index steps) {
  return run_ensemble(trials, [&](std::size_t i) {
    auto rep = check_strichartz(random_decaying_field(grid, seed + i), pair, T, steps);
    rep.seed = seed + i;
    return rep;
  });
}

EnsembleSummary inhomogeneous_strichartz_ensemble(const Grid& grid, const StrichartzPair& pair0,
                                                  const StrichartzPair& pair1, Index trials,
                                                  std::uint64_t seed, double T, Index steps) {
  return run_ensemble(trials, [&](std::size_t i) {
    auto rep = check_inhomogeneous_strichartz(random_space_time_field(grid, seed + i, T, steps),
                                              pair0, pair1);
    rep.seed = seed + i;
    return rep;
  });
}

EnsembleSummary weighted_semigroup_ensemble(const Grid& grid, double r, double t, Index trials,
                                            std::uint64_t seed) {
  return run_ensemble(trials, [&](std::size_t i) {
    auto rep = check_weighted_semigroup(random_decaying_field(grid, seed + i), r, t);
    rep.seed = seed + i;
    return rep;
  });
}

double relative_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------------------
// Evolution experiments

PersistenceResult persistence_experiment(const Field& u0, double lambda, double r, double T,
                                         Index steps, const StepperParams& params) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("persistence: r must be in (0, 1]");
  DiagnosticLog log;
  guard_boundary(u0, &log, "persistence initial data");
  const SpaceTimeField u = evolve_dnls(u0, lambda, T, steps, params);

  PersistenceResult res;
  res.report = build_norm_report(u, r);
  for (Index m = 1; m <= u.steps(); ++m) {
    if (!guard_boundary(u[m], &log, "persistence slice")) break;  // report the first trip only
  }
  res.initial_h2 = res.report.h2.front();
  res.initial_weighted = res.report.weighted_r.front();
  res.success = true;
  for (std::size_t m = 0; m < res.report.size(); ++m) {
    const double h2 = res.report.h2[m];
    const double w = res.report.weighted_r[m];
    if (!std::isfinite(h2) || !std::isfinite(w) || h2 > 10.0 * res.initial_h2 ||
        w > 10.0 * res.initial_weighted) {
      res.success = false;
    }
  }
  res.warnings = log.warnings();
  return res;
}

ConstraintResult constraint_propagation_experiment(const Field& phi0, double lambda, double T,
                                                   Index steps, const StepperParams& params,
                                                   const std::optional<Field>& psi0, double r) {
  const Field psi_start = psi0 ? *psi0 : constraint_map(phi0, lambda);
  StepperParams p = params;
  p.scheme = Scheme::splitstep_system;
  const auto [phi, psi] = evolve_system(phi0, psi_start, lambda, T, steps, p);

  ConstraintResult res;
  res.times = phi.times();
  res.residuals.reserve(phi.slices().size());
  for (Index m = 0; m <= phi.steps(); ++m) {
    res.residuals.push_back(constraint_residual(phi[m], psi[m], lambda));
  }
  res.max_residual = *std::max_element(res.residuals.begin(), res.residuals.end());
  res.constrained = res.max_residual <= kConstraintTolerance;
  res.report = build_norm_report(phi, r, res.residuals);
  return res;
}

ApproxSequenceTable approximation_sequence_experiment(const Field& u0, double lambda, double r,
                                                      double T, Index steps, Index n_levels,
                                                      const StepperParams& params) {
  if (n_levels < 3) throw std::invalid_argument("approximation sequence: need at least 3 levels");
  StepperParams p = params;
  p.scheme = Scheme::splitstep_system;
  const Field phi0 = gauge_forward(u0, lambda);

  ApproxSequenceTable table;
  std::vector<Field> data;
  std::vector<SpaceTimeField> sols;
  for (Index j = 0; j < n_levels; ++j) {
    const double fraction = std::ldexp(1.0, -int(n_levels - 1 - j));
    Field phi_n = low_pass(phi0, fraction);
    const Field psi_n = constraint_map(phi_n, lambda);
    table.levels.push_back({fraction, data_composite(phi_n, psi_n, r)});
    const auto evolved = evolve_system(phi_n, psi_n, lambda, T, steps, p);
    sols.push_back(map_slices(evolved.first,
                              [lambda](const Field& f) { return gauge_inverse(f, lambda); }));
    data.push_back(std::move(phi_n));
  }
  for (const auto& l : table.levels) table.rho_max = std::max(table.rho_max, l.rho);

  for (Index j = 0; j + 1 < n_levels; ++j) {
    ApproxPair pair;
    const Field dphi = data[j] - data[j + 1];
    pair.lhs = x_norm(sols[j] - sols[j + 1], r);
    pair.rhs = sobolev_norm(dphi, 2.0) + weighted_norm(dphi, r);
    pair.ratio = pair.rhs > 0.0 ? pair.lhs / pair.rhs : 0.0;
    table.pairs.push_back(pair);
  }

  // Pairs whose data differ only by roundoff carry no information.
  for (auto& q : table.pairs) {
    q.resolved = q.rhs > kApproxNoiseFloor * table.rho_max;
    if (q.resolved) ++table.resolved_pairs;
  }

  table.cauchy = true;
  double lo = kInfinity;
  double hi = 0.0;
  const ApproxPair* prev = nullptr;
  for (const auto& q : table.pairs) {
    if (!q.resolved) continue;
    if (prev && !(q.lhs < prev->lhs)) table.cauchy = false;
    prev = &q;
    lo = std::min(lo, q.ratio);
    hi = std::max(hi, q.ratio);
  }
  table.ratio_spread = hi > 0.0 ? hi / lo : 1.0;
  return table;
}

LipschitzReport lipschitz_data_experiment(const Field& phi0, const Field& phi0_tilde, double lambda,
                                          double r, double T, Index steps,
                                          const StepperParams& params) {
  StepperParams p = params;
  p.scheme = Scheme::splitstep_system;
  const Field psi0 = constraint_map(phi0, lambda);
  const Field psi0_tilde = constraint_map(phi0_tilde, lambda);
  const auto a = evolve_system(phi0, psi0, lambda, T, steps, p);
  const auto b = evolve_system(phi0_tilde, psi0_tilde, lambda, T, steps, p);

  LipschitzReport rep;
  rep.lhs = solution_composite(a.first - b.first, a.second - b.second, r);
  rep.rhs = data_composite(phi0 - phi0_tilde, psi0 - psi0_tilde, r);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace dnls
