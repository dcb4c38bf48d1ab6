#pragma once

// Periodic grids, complex fields on them, and Fourier-multiplier operators.
//
// All types are templated on the real scalar (double by default) and hold
// their data in dense Eigen vectors so that callers can drop into Eigen
// expressions through values()/coefficients().
//
// Transform convention: for nodes x_j = -L/2 + j h and wavenumbers
// xi_k = 2 pi k / L, the spectrum is the quadrature of
//     f^(xi) = int e^{-i x xi} f(x) dx ,
// i.e. f^_k = h (-1)^k FFT(f)_k. With this scaling the discrete Plancherel
// identity  h sum |f_j|^2 = (1/2pi) sum |f^_k|^2 dxi  holds exactly.

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnls {

using Eigen::Index;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniform periodic grid on [-L/2, L/2). Node n/2 sits at x = 0.
template <typename Scalar>
class BasicGrid {
 public:
  BasicGrid(Index n_points, Scalar box_length) : n_(n_points), length_(box_length) {
    if (n_points < 16 || (n_points & (n_points - 1)) != 0) {
      throw std::invalid_argument("grid: n_points must be a power of two >= 16, got " +
                                  std::to_string(n_points));
    }
    if (!(box_length > Scalar(0)) || !std::isfinite(static_cast<double>(box_length))) {
      throw std::invalid_argument("grid: box_length must be positive and finite");
    }
  }

  Index size() const { return n_; }
  Scalar length() const { return length_; }
  Scalar spacing() const { return length_ / Scalar(n_); }
  Scalar node(Index j) const { return -length_ / Scalar(2) + Scalar(j) * spacing(); }

  /// Signed integer wavenumber of FFT slot k: 0..n/2-1 then -n/2..-1.
  Index mode(Index k) const { return k < n_ / 2 ? k : k - n_; }
  Scalar wavenumber(Index k) const {
    return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(mode(k)) / length_;
  }
  Index nyquist_index() const { return n_ / 2; }
  Scalar max_frequency() const { return std::numbers::pi_v<Scalar> * Scalar(n_) / length_; }
  Scalar frequency_spacing() const { return Scalar(2) * std::numbers::pi_v<Scalar> / length_; }

  RealVector<Scalar> nodes() const {
    RealVector<Scalar> x(n_);
    for (Index j = 0; j < n_; ++j) x[j] = node(j);
    return x;
  }
  /// Wavenumbers in FFT storage order.
  RealVector<Scalar> frequencies() const {
    RealVector<Scalar> xi(n_);
    for (Index k = 0; k < n_; ++k) xi[k] = wavenumber(k);
    return xi;
  }

  friend bool operator==(const BasicGrid& a, const BasicGrid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }
  friend bool operator!=(const BasicGrid& a, const BasicGrid& b) { return !(a == b); }

 private:
  Index n_;
  Scalar length_;
};

template <typename Scalar = double>
BasicGrid<Scalar> make_grid(Index n_points, Scalar box_length) {
  return BasicGrid<Scalar>(n_points, box_length);
}

/// Complex samples bound to a grid.
template <typename Scalar>
class BasicField {
 public:
  using Grid = BasicGrid<Scalar>;
  using Complex = std::complex<Scalar>;
  using Vector = ComplexVector<Scalar>;

  explicit BasicField(const Grid& grid) : grid_(grid), values_(Vector::Zero(grid.size())) {}
  BasicField(const Grid& grid, Vector values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw std::invalid_argument("field: value count does not match grid size");
    }
  }

  /// Samples fn(x_j) at every node.
  template <typename Fn>
  static BasicField sample(const Grid& grid, Fn&& fn) {
    Vector v(grid.size());
    for (Index j = 0; j < grid.size(); ++j) v[j] = Complex(fn(grid.node(j)));
    return BasicField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  Index size() const { return values_.size(); }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  Complex operator[](Index j) const { return values_[j]; }
  Complex& operator[](Index j) { return values_[j]; }

  bool all_finite() const { return values_.allFinite(); }

  BasicField& operator+=(const BasicField& o) {
    require_same_grid(o);
    values_ += o.values_;
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    require_same_grid(o);
    values_ -= o.values_;
    return *this;
  }
  BasicField& operator*=(Complex c) {
    values_ *= c;
    return *this;
  }

  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(Complex c, BasicField a) { return a *= c; }
  friend BasicField operator*(BasicField a, Complex c) { return a *= c; }

  void require_same_grid(const BasicField& o) const {
    if (grid_ != o.grid_) throw std::invalid_argument("field: operands live on different grids");
  }

 private:
  Grid grid_;
  Vector values_;
};

/// Pointwise product of two fields on the same grid.
template <typename Scalar>
BasicField<Scalar> pointwise(const BasicField<Scalar>& a, const BasicField<Scalar>& b) {
  a.require_same_grid(b);
  return BasicField<Scalar>(a.grid(), a.values().cwiseProduct(b.values()));
}

/// Fourier coefficients f^(xi_k), stored in FFT order (see BasicGrid::mode).
template <typename Scalar>
class BasicSpectrum {
 public:
  using Grid = BasicGrid<Scalar>;
  using Vector = ComplexVector<Scalar>;

  BasicSpectrum(const Grid& grid, Vector coefficients)
      : grid_(grid), coefficients_(std::move(coefficients)) {}

  const Grid& grid() const { return grid_; }
  const Vector& coefficients() const { return coefficients_; }
  Vector& coefficients() { return coefficients_; }

  /// Coefficient at signed integer wavenumber k in [-n/2, n/2).
  std::complex<Scalar> at_mode(Index k) const {
    const Index n = grid_.size();
    if (k < -n / 2 || k >= n / 2) throw std::out_of_range("spectrum: mode outside [-n/2, n/2)");
    return coefficients_[k >= 0 ? k : k + n];
  }

 private:
  Grid grid_;
  Vector coefficients_;
};

using Grid = BasicGrid<double>;
using Field = BasicField<double>;
using Spectrum = BasicSpectrum<double>;

namespace detail {

// Eigen::FFT caches plans internally and is not safe to share across threads.
template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

template <typename Scalar>
ComplexVector<Scalar> raw_forward(const ComplexVector<Scalar>& v) {
  ComplexVector<Scalar> out(v.size());
  fft_engine<Scalar>().fwd(out, v);
  return out;
}

// Scaled by 1/n, so raw_inverse(raw_forward(v)) == v.
template <typename Scalar>
ComplexVector<Scalar> raw_inverse(const ComplexVector<Scalar>& v) {
  ComplexVector<Scalar> out(v.size());
  fft_engine<Scalar>().inv(out, v);
  return out;
}

}  // namespace detail

/// Applies the Fourier multiplier symbol(xi, k) where k is the FFT slot.
template <typename Scalar, typename Symbol>
BasicField<Scalar> apply_multiplier(const BasicField<Scalar>& f, Symbol&& symbol) {
  const auto& g = f.grid();
  ComplexVector<Scalar> hat = detail::raw_forward<Scalar>(f.values());
  for (Index k = 0; k < g.size(); ++k) hat[k] *= symbol(g.wavenumber(k), k);
  return BasicField<Scalar>(g, detail::raw_inverse<Scalar>(hat));
}

template <typename Scalar>
BasicSpectrum<Scalar> fourier_transform(const BasicField<Scalar>& f) {
  const auto& g = f.grid();
  ComplexVector<Scalar> hat = detail::raw_forward<Scalar>(f.values());
  const Scalar h = g.spacing();
  for (Index k = 0; k < g.size(); ++k) hat[k] *= (k % 2 == 0) ? h : -h;
  return BasicSpectrum<Scalar>(g, std::move(hat));
}

template <typename Scalar>
BasicField<Scalar> inverse_transform(const BasicSpectrum<Scalar>& s) {
  const auto& g = s.grid();
  ComplexVector<Scalar> hat = s.coefficients();
  const Scalar inv_h = Scalar(1) / g.spacing();
  for (Index k = 0; k < g.size(); ++k) hat[k] *= (k % 2 == 0) ? inv_h : -inv_h;
  return BasicField<Scalar>(g, detail::raw_inverse<Scalar>(hat));
}

/// e^{it d_x^2} f, i.e. multiplier e^{-i t xi^2}. Valid for any real t.
template <typename Scalar>
BasicField<Scalar> free_propagator(const BasicField<Scalar>& f, Scalar t) {
  if (t == Scalar(0)) return f;
  return apply_multiplier(f, [t](Scalar xi, Index) {
    return std::polar(Scalar(1), -t * xi * xi);
  });
}

/// D_x^alpha f with multiplier |xi|^alpha, alpha >= 0.
template <typename Scalar>
BasicField<Scalar> fractional_derivative(const BasicField<Scalar>& f, Scalar alpha) {
  if (alpha < Scalar(0)) throw std::invalid_argument("fractional_derivative: alpha must be >= 0");
  if (alpha == Scalar(0)) return f;
  return apply_multiplier(f, [alpha](Scalar xi, Index) {
    return std::complex<Scalar>(std::pow(std::abs(xi), alpha));
  });
}

/// d_x^order f for order 1 or 2, multiplier (i xi)^order. The Nyquist slot of
/// the first-order multiplier is zeroed.
template <typename Scalar>
BasicField<Scalar> spatial_derivative(const BasicField<Scalar>& f, int order) {
  const Index nyq = f.grid().nyquist_index();
  switch (order) {
    case 1:
      return apply_multiplier(f, [nyq](Scalar xi, Index k) {
        return k == nyq ? std::complex<Scalar>(0) : std::complex<Scalar>(0, xi);
      });
    case 2:
      return apply_multiplier(f, [](Scalar xi, Index) { return std::complex<Scalar>(-xi * xi); });
    default:
      throw std::invalid_argument("spatial_derivative: order must be 1 or 2, got " +
                                  std::to_string(order));
  }
}

/// (1 + D_x^2)^alpha f.
template <typename Scalar>
BasicField<Scalar> bessel_potential(const BasicField<Scalar>& f, Scalar alpha) {
  if (alpha == Scalar(0)) return f;
  return apply_multiplier(f, [alpha](Scalar xi, Index) {
    return std::complex<Scalar>(std::pow(Scalar(1) + xi * xi, alpha));
  });
}

/// Zeroes every mode with |xi| > fraction * max|xi|.
template <typename Scalar>
BasicField<Scalar> low_pass(const BasicField<Scalar>& f, Scalar fraction) {
  const Scalar cutoff = fraction * f.grid().max_frequency();
  return apply_multiplier(f, [cutoff](Scalar xi, Index) {
    return std::abs(xi) <= cutoff * (Scalar(1) + Scalar(8) * std::numeric_limits<Scalar>::epsilon())
               ? std::complex<Scalar>(1)
               : std::complex<Scalar>(0);
  });
}

// ---------------------------------------------------------------------------
// Truncation monitoring

/// Result of the boundary-decay check on a periodic box.
struct BoundaryGuard {
  double boundary_max = 0.0;
  double field_max = 0.0;
  bool passed = true;
};

/// Passes when max(|f_0|, |f_{n-1}|) < 1e-8 max|f| (or f is identically 0).
template <typename Scalar>
BoundaryGuard check_boundary_decay(const BasicField<Scalar>& f) {
  BoundaryGuard g;
  const auto& v = f.values();
  g.field_max = static_cast<double>(v.cwiseAbs().maxCoeff());
  g.boundary_max = static_cast<double>(std::max(std::abs(v[0]), std::abs(v[v.size() - 1])));
  g.passed = g.field_max == 0.0 || g.boundary_max < 1e-8 * g.field_max;
  return g;
}

/// Collects non-fatal warnings (boundary guard trips, etc).
class DiagnosticLog {
 public:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool empty() const { return warnings_.empty(); }

 private:
  std::vector<std::string> warnings_;
};

template <typename Scalar>
bool guard_boundary(const BasicField<Scalar>& f, DiagnosticLog* log, const char* where) {
  const BoundaryGuard g = check_boundary_decay(f);
  if (!g.passed && log != nullptr) {
    log->warn(std::string(where) + ": boundary decay guard tripped (boundary " +
              std::to_string(g.boundary_max) + " vs max " + std::to_string(g.field_max) + ")");
  }
  return g.passed;
}

}  // namespace dnls
