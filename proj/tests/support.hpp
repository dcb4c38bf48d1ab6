#pragma once

// Independent oracles shared by the unit tests. Nothing here calls into the
// spectral machinery: quadratures are composite Simpson, random fields are
// built mode by mode from explicit exponentials.

#include "dnls/spectral.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

namespace dnls::testing {

using Complex = std::complex<double>;

// Composite Simpson on [a, b] with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// Free Schroedinger evolution of e^{-x^2/2}:  (1+2it)^{-1/2} exp(-x^2 / (2(1+2it))).
inline Complex gaussian_free(double x, double t) {
  const Complex s(1.0, 2.0 * t);
  return std::exp(-x * x / (2.0 * s)) / std::sqrt(s);
}

// sum_{|m| <= modes} c_m e^{i 2 pi m x / L} with seeded complex normal c_m.
inline Field random_band_limited(const Grid& g, std::mt19937_64& rng, int modes = 6) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(2 * modes + 1);
  for (auto& z : c) {
    const double re = normal(rng);
    z = Complex(re, normal(rng));
  }
  const double k0 = 2.0 * std::numbers::pi / g.length();
  return Field::sample(g, [&](double x) {
    Complex s = 0.0;
    for (int m = -modes; m <= modes; ++m) s += c[m + modes] * std::polar(1.0, k0 * m * x);
    return s;
  });
}

// Gaussian envelope e^{-(x/w)^2/2} times a random low-mode trigonometric polynomial.
inline Field random_decaying(const Grid& g, std::mt19937_64& rng, double width = 1.0, int modes = 3) {
  const Field p = random_band_limited(g, rng, modes);
  Field f = p;
  for (Index j = 0; j < g.size(); ++j) {
    const double y = g.node(j) / width;
    f[j] *= std::exp(-0.5 * y * y);
  }
  return f;
}

inline Field plane_wave(const Grid& g, int mode, Complex amplitude = 1.0) {
  const double k = 2.0 * std::numbers::pi * mode / g.length();
  return Field::sample(g, [=](double x) { return amplitude * std::polar(1.0, k * x); });
}

inline double max_abs_diff(const Field& a, const Field& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

// Discrete l2 distance relative to the l2 size of b (plain sums, no quadrature weight).
inline double rel_diff(const Field& a, const Field& b) {
  const double nb = b.values().norm();
  return (a.values() - b.values()).norm() / (nb > 0 ? nb : 1.0);
}

}  // namespace dnls::testing
