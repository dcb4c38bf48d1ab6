#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnls/norms.hpp"
#include "dnls/spectral.hpp"
#include "support.hpp"

using namespace dnls;
using namespace dnls::testing;
using std::numbers::pi;

TEST_CASE("grid on a 2 pi box has integer wavenumbers") {
  const Grid g = make_grid(16, 2.0 * pi);
  CHECK(g.spacing() == doctest::Approx(2.0 * pi / 16));
  CHECK(g.node(0) == doctest::Approx(-pi));
  CHECK(g.node(15) == doctest::Approx(pi - g.spacing()));
  CHECK(g.node(8) == 0.0);
  const auto xi = g.frequencies();
  std::vector<double> sorted(xi.data(), xi.data() + xi.size());
  std::sort(sorted.begin(), sorted.end());
  for (int k = -8; k < 8; ++k) CHECK(sorted[k + 8] == doctest::Approx(double(k)).epsilon(1e-14));
}

TEST_CASE("grid spacing and frequency range") {
  const Grid g = make_grid(1024, 64.0);
  CHECK(g.spacing() == 0.0625);
  CHECK(g.max_frequency() == doctest::Approx(pi * 1024 / 64));
  CHECK(std::abs(g.wavenumber(g.nyquist_index())) == doctest::Approx(pi * 1024 / 64));
  // nodes uniform
  const auto x = g.nodes();
  for (Index j = 1; j < x.size(); ++j) CHECK(x[j] - x[j - 1] == doctest::Approx(0.0625));
}

TEST_CASE("grid rejects bad sizes") {
  CHECK_THROWS_AS(make_grid(100, 64.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 64.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(64, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("fields on different grids do not mix") {
  Field a(make_grid(32, 1.0));
  Field b(make_grid(32, 2.0));
  CHECK_THROWS_AS(a += b, std::invalid_argument);
}

TEST_CASE("transform of zero and of a plane wave") {
  const Grid g = make_grid(64, 2.0 * pi);
  const Spectrum z = fourier_transform(Field(g));
  CHECK(z.coefficients().cwiseAbs().maxCoeff() == 0.0);

  const Spectrum s = fourier_transform(plane_wave(g, 5));
  for (Index k = -32; k < 32; ++k) {
    if (k == 5) {
      CHECK(std::abs(s.at_mode(k)) == doctest::Approx(2.0 * pi));  // h * n
    } else {
      CHECK(std::abs(s.at_mode(k)) < 1e-12);
    }
  }
}

TEST_CASE("transform of a Gaussian matches its analytic pair") {
  const Grid g = make_grid(1024, 64.0);
  const Field f = Field::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
  const Spectrum s = fourier_transform(f);
  double err = 0.0;
  for (Index k = 0; k < g.size(); ++k) {
    const double xi = g.wavenumber(k);
    err = std::max(err, std::abs(s.coefficients()[k] - std::sqrt(2.0 * pi) * std::exp(-0.5 * xi * xi)));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("transform round trip") {
  std::mt19937_64 rng(3);
  const Grid g = make_grid(256, 20.0);
  std::normal_distribution<double> normal;
  ComplexVector<double> v(g.size());
  for (auto& z : v) z = Complex(normal(rng), normal(rng));
  const Field f(g, v);
  CHECK(rel_diff(inverse_transform(fourier_transform(f)), f) < 1e-12);
}

TEST_CASE("free propagator basics") {
  const Grid g = make_grid(128, 2.0 * pi);
  std::mt19937_64 rng(11);
  const Field f = random_band_limited(g, rng);
  CHECK(max_abs_diff(free_propagator(f, 0.0), f) == 0.0);

  const double t = 0.37;
  const Field w = plane_wave(g, 3);
  const Field expected = std::polar(1.0, -t * 9.0) * w;
  CHECK(max_abs_diff(free_propagator(w, t), expected) < 1e-12);
}

TEST_CASE("closed-form Gaussian evolution solves the free equation") {
  // substitution check of the oracle itself: i u_t + u_xx = 0 by finite differences
  const double h = 1e-3;
  for (double t : {0.1, 0.5, 1.3}) {
    for (double x : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
      const Complex ut = (gaussian_free(x, t + h) - gaussian_free(x, t - h)) / (2 * h);
      const Complex uxx =
          (gaussian_free(x + h, t) - 2.0 * gaussian_free(x, t) + gaussian_free(x - h, t)) / (h * h);
      CHECK(std::abs(Complex(0, 1) * ut + uxx) < 1e-5);
    }
  }
  CHECK(std::abs(gaussian_free(0.8, 0.0) - std::exp(-0.32)) < 1e-15);
}

TEST_CASE("free propagator matches the Gaussian closed form") {
  const Grid g = make_grid(1024, 64.0);
  const Field f = Field::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
  const Field exact = Field::sample(g, [](double x) { return gaussian_free(x, 0.5); });
  CHECK(max_abs_diff(free_propagator(f, 0.5), exact) < 1e-10);
}

TEST_CASE("fractional derivative") {
  const Grid g = make_grid(64, 2.0 * pi);
  const Field w = plane_wave(g, -4);
  CHECK(max_abs_diff(fractional_derivative(w, 0.5), 2.0 * w) < 1e-12);
  CHECK(max_abs_diff(fractional_derivative(w, 0.0), w) == 0.0);
  CHECK_THROWS_AS(fractional_derivative(w, -0.5), std::invalid_argument);

  // the zero mode: kept at alpha = 0, removed for alpha > 0
  const Field one = Field::sample(g, [](double) { return Complex(1.0); });
  CHECK(max_abs_diff(fractional_derivative(one, 0.0), one) < 1e-14);
  CHECK(fractional_derivative(one, 0.3).values().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fractional derivative of a Gaussian against quadrature") {
  // (1/2pi) int |xi| |f^|^2 dxi with f^ = sqrt(2 pi) e^{-xi^2/2}
  const double continuum = 2.0 * simpson([](double xi) { return xi * std::exp(-xi * xi); }, 0.0, 40.0);

  // The frequency lattice sum of g(xi) = |xi| e^{-xi^2} carries the
  // Euler-Maclaurin kink terms of g at 0: -d^2/6 - d^4/60 - d^6/252 ... with
  // d the lattice spacing (from g'(0) = 1, g'''(0) = -6, g^(5)(0) = 60).
  double raw_error[2];
  int i = 0;
  for (auto [n, L] : {std::pair{1024, 64.0}, std::pair{2048, 128.0}}) {
    const Grid g = make_grid(n, L);
    const Field f = Field::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
    const double lhs = std::pow(lp_norm(fractional_derivative(f, 0.5), 2.0), 2);
    const double d = g.frequency_spacing();
    const double corrected = continuum - d * d / 6.0 - std::pow(d, 4) / 60.0;
    CHECK(lhs == doctest::Approx(corrected).epsilon(1e-8));
    raw_error[i++] = continuum - lhs;
  }
  // doubling the box halves d: raw error drops 4x
  CHECK(raw_error[0] / raw_error[1] == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("integer derivatives") {
  const Grid g = make_grid(64, 2.0 * pi);
  const Field w = plane_wave(g, 7);
  CHECK(max_abs_diff(spatial_derivative(w, 1), Complex(0, 7) * w) < 1e-12);

  const Field c = Field::sample(g, [](double) { return Complex(2.5, -1.0); });
  CHECK(spatial_derivative(c, 2).values().cwiseAbs().maxCoeff() < 1e-13);

  const Field s = Field::sample(g, [](double x) { return Complex(std::sin(x)); });
  CHECK(max_abs_diff(spatial_derivative(s, 2), -1.0 * s) < 1e-12);

  CHECK_THROWS_AS(spatial_derivative(s, 0), std::invalid_argument);
  CHECK_THROWS_AS(spatial_derivative(s, 3), std::invalid_argument);
}

TEST_CASE("Nyquist mode of the first derivative is removed") {
  const Grid g = make_grid(32, 2.0 * pi);
  // (-1)^j is the real Nyquist-only field
  Field f(g);
  for (Index j = 0; j < g.size(); ++j) f[j] = (j % 2 ? -1.0 : 1.0);
  const Field d = spatial_derivative(f, 1);
  CHECK(d.all_finite());
  CHECK(d.values().cwiseAbs().maxCoeff() < 1e-12);
  // the even multiplier keeps it: -xi^2 at xi = -n/2
  CHECK(max_abs_diff(spatial_derivative(f, 2), -256.0 * f) < 1e-10);
}

TEST_CASE("Bessel potential") {
  const Grid g = make_grid(64, 2.0 * pi);
  const Field w = plane_wave(g, 3);
  CHECK(max_abs_diff(bessel_potential(w, 0.0), w) < 1e-14);
  CHECK(max_abs_diff(bessel_potential(w, 0.5), std::sqrt(10.0) * w) < 1e-12);

  std::mt19937_64 rng(5);
  const Field f = random_band_limited(g, rng);
  CHECK(rel_diff(bessel_potential(bessel_potential(f, 1.3), -1.3), f) < 1e-12);

  const Grid big = make_grid(1024, 64.0);
  const Field gauss = Field::sample(big, [](double x) { return std::exp(-0.5 * x * x); });
  for (double s : {0.5, 1.0, 2.0}) {
    CHECK(lp_norm(bessel_potential(gauss, s / 2), 2.0) ==
          doctest::Approx(sobolev_norm(gauss, s)).epsilon(1e-10));
  }
}

TEST_CASE("Plancherel for random band-limited fields") {
  std::mt19937_64 rng(17);
  const Grid g = make_grid(256, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = random_band_limited(g, rng, 20);
    const Spectrum s = fourier_transform(f);
    const double spectral = s.coefficients().squaredNorm() * g.frequency_spacing() / (2.0 * pi);
    CHECK(std::sqrt(spectral) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("propagator group law, multiplier composition, unitarity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> time(-10.0, 10.0);
  const Grid g = make_grid(128, 16.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = random_band_limited(g, rng, 12);
    const double t = time(rng);
    CHECK(lp_norm(free_propagator(f, t), 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    if (trial < 10) {
      const double s = time(rng);
      CHECK(rel_diff(free_propagator(free_propagator(f, s), t), free_propagator(f, s + t)) < 1e-12);
      CHECK(rel_diff(fractional_derivative(fractional_derivative(f, 0.3), 0.45),
                     fractional_derivative(f, 0.75)) < 1e-12);
    }
  }
}

TEST_CASE("boundary decay guard") {
  const Grid g = make_grid(256, 40.0);
  const Field gauss = Field::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
  CHECK(check_boundary_decay(gauss).passed);
  CHECK(check_boundary_decay(Field(g)).passed);

  const Field edge = Field::sample(g, [](double x) { return std::exp(-0.5 * (x + 20.0) * (x + 20.0)); });
  DiagnosticLog log;
  CHECK_FALSE(guard_boundary(edge, &log, "edge test"));
  REQUIRE(log.warnings().size() == 1);
  CHECK(log.warnings()[0].find("edge test") != std::string::npos);
}
