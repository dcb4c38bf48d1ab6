#pragma once

// Space and space-time norms on periodic grids.
//
// Spatial integrals use the trapezoid rule on the uniform periodic grid,
// which is plain h * sum and spectrally accurate for smooth decaying data.
// Time integrals use the composite trapezoid rule over stored slices.

#include "dnls/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dnls {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

template <typename Scalar>
Scalar lp_norm(const BasicField<Scalar>& f, Scalar p) {
  if (!(p >= Scalar(1))) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  const auto mod = f.values().cwiseAbs();
  if (std::isinf(p)) return mod.size() == 0 ? Scalar(0) : mod.maxCoeff();
  const Scalar h = f.grid().spacing();
  if (p == Scalar(2)) return std::sqrt(h * mod.squaredNorm());
  return std::pow(h * mod.array().pow(p).sum(), Scalar(1) / p);
}

/// H^s norm from the spectral quadrature of (1+xi^2)^s |f^|^2.
template <typename Scalar>
Scalar sobolev_norm(const BasicField<Scalar>& f, Scalar s) {
  if (s < Scalar(0)) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  const auto& g = f.grid();
  const ComplexVector<Scalar> hat = detail::raw_forward<Scalar>(f.values());
  Scalar acc = 0;
  for (Index k = 0; k < g.size(); ++k) {
    const Scalar xi = g.wavenumber(k);
    acc += std::pow(Scalar(1) + xi * xi, s) * std::norm(hat[k]);
  }
  // (1/2pi) * dxi * h^2 = h / n
  return std::sqrt(acc * g.spacing() / Scalar(g.size()));
}

/// || |x|^r f ||_{L^2}, r in [0, 1]. Records a warning in `log` when the
/// field has not decayed at the box edge.
///
/// For 0 < r < 1 the weight has a kink at x = 0 (a grid node) and the plain
/// trapezoid sum is only O(h^{2r+1}). The leading Navot term
/// 2 zeta(-2r) |f(0)|^2 h^{2r+1} is removed, leaving O(h^{2r+3}).
template <typename Scalar>
Scalar weighted_norm(const BasicField<Scalar>& f, Scalar r, DiagnosticLog* log = nullptr) {
  if (!(r >= Scalar(0) && r <= Scalar(1))) {
    throw std::invalid_argument("weighted_norm: r must be in [0, 1]");
  }
  guard_boundary(f, log, "weighted_norm");
  const auto& g = f.grid();
  const Scalar beta = Scalar(2) * r;
  Scalar acc = 0;
  for (Index j = 0; j < g.size(); ++j) {
    acc += std::norm(f[j]) * std::pow(std::abs(g.node(j)), beta);
  }
  acc *= g.spacing();
  if (r > Scalar(0) && r < Scalar(1)) {
    const Scalar origin = std::norm(f[g.size() / 2]);
    acc -= Scalar(2) * std::riemann_zeta(-beta) * origin * std::pow(g.spacing(), beta + Scalar(1));
  }
  return std::sqrt(std::max(acc, Scalar(0)));
}

/// Time-indexed fields on the uniform mesh t_m = m T / M, m = 0..M.
template <typename Scalar>
class BasicSpaceTimeField {
 public:
  using Field = BasicField<Scalar>;
  using Grid = BasicGrid<Scalar>;

  BasicSpaceTimeField(Scalar horizon, std::vector<Field> slices)
      : horizon_(horizon), slices_(std::move(slices)) {
    if (slices_.empty()) throw std::invalid_argument("space-time field: needs at least one slice");
    if (slices_.size() > 1 && !(horizon_ > Scalar(0))) {
      throw std::invalid_argument("space-time field: horizon must be positive");
    }
    for (const auto& s : slices_) slices_.front().require_same_grid(s);
  }

  /// M + 1 zero slices.
  static BasicSpaceTimeField zeros(const Grid& grid, Scalar horizon, Index steps) {
    return BasicSpaceTimeField(horizon, std::vector<Field>(steps + 1, Field(grid)));
  }

  const Grid& grid() const { return slices_.front().grid(); }
  Scalar horizon() const { return horizon_; }
  Index steps() const { return static_cast<Index>(slices_.size()) - 1; }
  Scalar time_step() const { return steps() == 0 ? Scalar(0) : horizon_ / Scalar(steps()); }
  Scalar time(Index m) const { return m == steps() ? horizon_ : Scalar(m) * time_step(); }
  std::vector<Scalar> times() const {
    std::vector<Scalar> t(slices_.size());
    for (Index m = 0; m <= steps(); ++m) t[m] = time(m);
    return t;
  }

  const Field& operator[](Index m) const { return slices_[m]; }
  Field& operator[](Index m) { return slices_[m]; }
  const std::vector<Field>& slices() const { return slices_; }

  BasicSpaceTimeField& operator-=(const BasicSpaceTimeField& o) {
    require_same_mesh(o);
    for (size_t m = 0; m < slices_.size(); ++m) slices_[m] -= o.slices_[m];
    return *this;
  }
  BasicSpaceTimeField& operator+=(const BasicSpaceTimeField& o) {
    require_same_mesh(o);
    for (size_t m = 0; m < slices_.size(); ++m) slices_[m] += o.slices_[m];
    return *this;
  }
  friend BasicSpaceTimeField operator-(BasicSpaceTimeField a, const BasicSpaceTimeField& b) {
    return a -= b;
  }
  friend BasicSpaceTimeField operator+(BasicSpaceTimeField a, const BasicSpaceTimeField& b) {
    return a += b;
  }

  void require_same_mesh(const BasicSpaceTimeField& o) const {
    if (slices_.size() != o.slices_.size() ||
        std::abs(horizon_ - o.horizon_) > Scalar(1e-12) * std::max(Scalar(1), horizon_)) {
      throw std::invalid_argument("space-time field: time meshes differ");
    }
    slices_.front().require_same_grid(o.slices_.front());
  }

 private:
  Scalar horizon_;
  std::vector<Field> slices_;
};

using SpaceTimeField = BasicSpaceTimeField<double>;

/// Applies fn to every slice.
template <typename Scalar, typename Fn>
BasicSpaceTimeField<Scalar> map_slices(const BasicSpaceTimeField<Scalar>& F, Fn&& fn) {
  std::vector<BasicField<Scalar>> out;
  out.reserve(F.slices().size());
  for (const auto& s : F.slices()) out.push_back(fn(s));
  return BasicSpaceTimeField<Scalar>(F.horizon(), std::move(out));
}

/// Composite trapezoid of samples on the uniform mesh of F.
template <typename Scalar>
Scalar time_trapezoid(const std::vector<Scalar>& samples, Scalar dt) {
  if (samples.size() < 2) return Scalar(0);
  Scalar acc = Scalar(0.5) * (samples.front() + samples.back());
  for (size_t m = 1; m + 1 < samples.size(); ++m) acc += samples[m];
  return acc * dt;
}

/// || F ||_{L^q_T L^p_x}.
template <typename Scalar>
Scalar mixed_norm(const BasicSpaceTimeField<Scalar>& F, Scalar q, Scalar p) {
  if (!(q >= Scalar(1)) || !(p >= Scalar(1))) {
    throw std::invalid_argument("mixed_norm: exponents must be in [1, inf]");
  }
  std::vector<Scalar> inner;
  inner.reserve(F.slices().size());
  for (const auto& s : F.slices()) inner.push_back(lp_norm(s, p));
  if (std::isinf(q)) {
    Scalar m = 0;
    for (Scalar v : inner) m = std::max(m, v);
    return m;
  }
  for (Scalar& v : inner) v = std::pow(v, q);
  return std::pow(time_trapezoid(inner, F.time_step()), Scalar(1) / q);
}

/// ||F||_{L^inf_T L^2_x} + ||F||_{L^4_T L^inf_x}.
template <typename Scalar>
Scalar triple_norm(const BasicSpaceTimeField<Scalar>& F) {
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  return mixed_norm(F, inf, Scalar(2)) + mixed_norm(F, Scalar(4), inf);
}

template <typename Scalar>
BasicSpaceTimeField<Scalar> derivative_slices(const BasicSpaceTimeField<Scalar>& F, int order) {
  return map_slices(F, [order](const BasicField<Scalar>& s) { return spatial_derivative(s, order); });
}

/// Triple norms of F, d_x F and d_x^2 F summed.
template <typename Scalar>
Scalar y_norm(const BasicSpaceTimeField<Scalar>& F) {
  return triple_norm(F) + triple_norm(derivative_slices(F, 1)) +
         triple_norm(derivative_slices(F, 2));
}

/// sup_t || |x|^r F(t) ||_{L^2}.
template <typename Scalar>
Scalar weighted_sup_norm(const BasicSpaceTimeField<Scalar>& F, Scalar r) {
  Scalar m = 0;
  for (const auto& s : F.slices()) m = std::max(m, weighted_norm(s, r));
  return m;
}

template <typename Scalar>
Scalar x_norm(const BasicSpaceTimeField<Scalar>& F, Scalar r) {
  return y_norm(F) + weighted_sup_norm(F, r);
}

/// The solution-side composite bounded in terms of constrained data:
///   |||phi||| + |||d phi||| + |||d^2 phi||| + |||psi||| + |||d psi||| + sup_t || |x|^r phi ||.
template <typename Scalar>
Scalar solution_composite(const BasicSpaceTimeField<Scalar>& phi,
                          const BasicSpaceTimeField<Scalar>& psi, Scalar r) {
  return y_norm(phi) + triple_norm(psi) + triple_norm(derivative_slices(psi, 1)) +
         weighted_sup_norm(phi, r);
}

/// ||phi0||_{H^1} + ||psi0||_{H^1} + || |x|^r phi0 ||_{L^2}.
template <typename Scalar>
Scalar data_composite(const BasicField<Scalar>& phi0, const BasicField<Scalar>& psi0, Scalar r) {
  return sobolev_norm(phi0, Scalar(1)) + sobolev_norm(psi0, Scalar(1)) + weighted_norm(phi0, r);
}

}  // namespace dnls
