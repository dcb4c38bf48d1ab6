#pragma once

// Gauge transformation between DNLS and the constrained cubic NLS system.
//
//   phi = exp(-i lambda int_{-L/2}^x |u|^2) u ,   u = exp(i lambda int_{-L/2}^x |phi|^2) phi ,
//   psi = d_x phi + i (lambda/2) |phi|^2 phi .
//
// The lower limit -inf is mapped to the left box edge, so the gauge factor is
// not periodic: it jumps by exp(i lambda ||u||^2) across the seam. Callers are
// expected to keep the data decayed at the edge (see check_boundary_decay).

#include "dnls/norms.hpp"
#include "dnls/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace dnls {

/// Running integral  c_j = int_{x_0}^{x_j} |u|^2 dy.
///
/// |u|^2 is split into its mean (integrated exactly as a linear ramp) and a
/// zero-mean periodic remainder integrated spectrally, so the result is
/// spectrally accurate for smooth data. For decaying data the last entry
/// equals ||u||_{L^2}^2 up to the mass in the final cell.
template <typename Scalar>
RealVector<Scalar> cumulative_mass(const BasicField<Scalar>& u, DiagnosticLog* log = nullptr) {
  guard_boundary(u, log, "cumulative_mass");
  const auto& g = u.grid();
  const Index n = g.size();
  const ComplexVector<Scalar> density = u.values().cwiseAbs2().template cast<std::complex<Scalar>>();
  ComplexVector<Scalar> hat = detail::raw_forward<Scalar>(density);
  const Scalar mean = hat[0].real() / Scalar(n);
  hat[0] = 0;
  hat[g.nyquist_index()] = 0;
  for (Index k = 1; k < n; ++k) {
    if (k == g.nyquist_index()) continue;
    hat[k] /= std::complex<Scalar>(0, g.wavenumber(k));
  }
  const ComplexVector<Scalar> periodic = detail::raw_inverse<Scalar>(hat);
  RealVector<Scalar> c(n);
  const Scalar base = periodic[0].real();
  for (Index j = 0; j < n; ++j) {
    c[j] = mean * Scalar(j) * g.spacing() + (periodic[j].real() - base);
  }
  return c;
}

/// Unit-modulus factor exp(i lambda int_{-L/2}^x |f|^2) together with the seam jump.
template <typename Scalar>
struct BasicGaugeFactor {
  BasicGrid<Scalar> grid;
  ComplexVector<Scalar> values;
  Scalar wrap_phase = 0;
};

using GaugeFactor = BasicGaugeFactor<double>;

template <typename Scalar>
BasicGaugeFactor<Scalar> gauge_factor(const BasicField<Scalar>& f, Scalar lambda,
                                      DiagnosticLog* log = nullptr) {
  const RealVector<Scalar> c = cumulative_mass(f, log);
  ComplexVector<Scalar> e(c.size());
  for (Index j = 0; j < c.size(); ++j) e[j] = std::polar(Scalar(1), lambda * c[j]);
  const Scalar mass = lp_norm(f, Scalar(2));
  return {f.grid(), std::move(e), lambda * mass * mass};
}

template <typename Scalar>
BasicField<Scalar> gauge_forward(const BasicField<Scalar>& u, Scalar lambda,
                                 DiagnosticLog* log = nullptr) {
  if (lambda == Scalar(0)) return u;
  const auto e = gauge_factor(u, lambda, log);
  return BasicField<Scalar>(u.grid(), e.values.conjugate().cwiseProduct(u.values()));
}

template <typename Scalar>
BasicField<Scalar> gauge_inverse(const BasicField<Scalar>& phi, Scalar lambda,
                                 DiagnosticLog* log = nullptr) {
  if (lambda == Scalar(0)) return phi;
  const auto e = gauge_factor(phi, lambda, log);
  return BasicField<Scalar>(phi.grid(), e.values.cwiseProduct(phi.values()));
}

/// psi = d_x phi + i (lambda/2) |phi|^2 phi.
template <typename Scalar>
BasicField<Scalar> constraint_map(const BasicField<Scalar>& phi, Scalar lambda) {
  BasicField<Scalar> psi = spatial_derivative(phi, 1);
  const std::complex<Scalar> c(0, lambda / Scalar(2));
  psi.values().array() += c * phi.values().cwiseAbs2().array() * phi.values().array();
  return psi;
}

/// ||psi - constraint_map(phi)||_{L^2} / max(1, ||psi||_{L^2}).
template <typename Scalar>
Scalar constraint_residual(const BasicField<Scalar>& phi, const BasicField<Scalar>& psi,
                           Scalar lambda) {
  const BasicField<Scalar> diff = psi - constraint_map(phi, lambda);
  return lp_norm(diff, Scalar(2)) / std::max(Scalar(1), lp_norm(psi, Scalar(2)));
}

}  // namespace dnls
