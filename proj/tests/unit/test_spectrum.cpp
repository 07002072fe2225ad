#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sobreg/spectrum.hpp"

using namespace sobreg;

TEST_CASE("polynomial decay evaluates x^-theta") {
  const Spectrum sp = build_spectrum(SpectralFamily::Polynomial, 4.0, 3, {}, 99);
  REQUIRE(sp.size() == 3);
  CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sp.eigenvalues[1] == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(sp.eigenvalues[2] == doctest::Approx(1.0 / 81.0).epsilon(1e-15));
}

TEST_CASE("exponential decay evaluates e^{-theta(x-1)}") {
  const Spectrum sp = build_spectrum(SpectralFamily::Exponential, 1.5, 2, {}, 0);
  CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sp.eigenvalues[1] == doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
}

TEST_CASE("perturbed spectrum stays in the band and stays monotone") {
  const Spectrum sp = build_spectrum(SpectralFamily::Exponential, 1.5, 200, {0.9, 1.1}, 7);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double f = std::exp(-1.5 * static_cast<double>(i));
    const double ratio = sp.eigenvalues[i] / f;
    CHECK(ratio >= 0.9);   // p_i^{-1} in [a, b] directly
    CHECK(ratio <= 1.1);
    CHECK(sp.p_inv[i] >= 0.9);
    CHECK(sp.p_inv[i] <= 1.1);
    if (i > 0) CHECK(sp.eigenvalues[i] <= sp.eigenvalues[i - 1]);
  }
}

TEST_CASE("construction is deterministic and prefix-stable") {
  const Spectrum a = build_spectrum(SpectralFamily::Exponential, 1.5, 100, {0.8, 1.2}, 42);
  const Spectrum b = build_spectrum(SpectralFamily::Exponential, 1.5, 100, {0.8, 1.2}, 42);
  CHECK(a.eigenvalues == b.eigenvalues);

  const Spectrum longer = build_spectrum(SpectralFamily::Exponential, 1.5, 150, {0.8, 1.2}, 42);
  for (std::size_t i = 0; i < 100; ++i) CHECK(longer.eigenvalues[i] == a.eigenvalues[i]);

  const Spectrum other = build_spectrum(SpectralFamily::Exponential, 1.5, 100, {0.8, 1.2}, 43);
  CHECK(a.eigenvalues != other.eigenvalues);
}

TEST_CASE("invalid spectrum parameters are rejected") {
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Exponential, 0.0, 5, {}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Polynomial, 1.0, 5, {}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Exponential, 1.5, 0, {}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Exponential, 1.5, 5, {2.0, 1.0}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Exponential, 1.5, 5, {0.0, 1.0}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Explicit, 1.0, 5, {}, 0),
                  std::invalid_argument);
}

TEST_CASE("bounds that could reorder eigenvalues are rejected up front") {
  // b/a = 2 exceeds e^{0.1}; some draw could break monotonicity.
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Exponential, 0.1, 50, {0.5, 1.0}, 0),
                  std::invalid_argument);
  // Polynomial: the pairwise ratio tightens as N grows.
  CHECK_NOTHROW(build_spectrum(SpectralFamily::Polynomial, 4.0, 3, {0.9, 1.1}, 0));
  CHECK_THROWS_AS(build_spectrum(SpectralFamily::Polynomial, 4.0, 200, {0.9, 1.1}, 0),
                  std::invalid_argument);
}

TEST_CASE("explicit spectra validate ordering and positivity") {
  CHECK_NOTHROW(explicit_spectrum({1.0, 0.5, 0.5, 0.1}));
  CHECK_THROWS_AS(explicit_spectrum({1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(explicit_spectrum({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(explicit_spectrum({}), std::invalid_argument);
}

TEST_CASE("beta constant per decay family") {
  CHECK(beta_of(SpectralFamily::Exponential, 1.5) == 1.0);
  CHECK(beta_of(SpectralFamily::Polynomial, 4.0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(beta_of(SpectralFamily::Polynomial, 2.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(beta_of(explicit_spectrum({1.0})), std::invalid_argument);
}

TEST_CASE("true function magnitudes follow |c_i| = p~_i lambda_i^r") {
  const Spectrum sp = explicit_spectrum({1.0, 0.25});

  SUBCASE("r = 1, no perturbation") {
    const TrueFunction tf = build_true_function(sp, 1.0, {}, 5, {}, CoefficientLaw::RandomSign, 1.0);
    CHECK(std::abs(tf.coefficients[0]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(tf.coefficients[1]) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("r = 0.5") {
    const TrueFunction tf = build_true_function(sp, 0.5, {}, 5, {}, CoefficientLaw::RandomSign, 1.0);
    CHECK(std::abs(tf.coefficients[1]) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("signs are plus or minus one") {
    const TrueFunction tf = build_true_function(sp, 1.0, {}, 5, {}, CoefficientLaw::RandomSign, 1.0);
    for (int s : tf.signs) CHECK((s == 1 || s == -1));
  }
}

TEST_CASE("magnitude-band law lands in [0.95, 1.05] lambda^r") {
  // first eigenvalue of the integral-equation testbed, r = 1.5
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double lam1 = 2.0 / ((4.0 - pi2) * (4.0 - pi2));
  const Spectrum sp = explicit_spectrum({lam1});
  const TrueFunction tf =
      build_true_function(sp, 1.5, {}, 11, {}, CoefficientLaw::MagnitudeBand, 1.25);
  const double base = std::pow(lam1, 1.5);
  CHECK(std::abs(tf.coefficients[0]) >= 0.95 * base);
  CHECK(std::abs(tf.coefficients[0]) <= 1.05 * base);
}

TEST_CASE("smoothness band property") {
  const Spectrum sp = build_spectrum(SpectralFamily::Exponential, 1.5, 80, {}, 3);
  const PerturbationBounds bounds{0.8, 1.25};
  const TrueFunction tf = build_true_function(sp, 1.2, bounds, 17);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double ratio = std::abs(tf.coefficients[i]) / std::pow(sp.eigenvalues[i], 1.2);
    CHECK(ratio >= 1.0 / bounds.b - 1e-12);
    CHECK(ratio <= 1.0 / bounds.a + 1e-12);
  }
}

TEST_CASE("admissibility bound on r is enforced and named") {
  const Spectrum exp_sp = build_spectrum(SpectralFamily::Exponential, 1.5, 10, {}, 0);
  CHECK_THROWS_WITH_AS(build_true_function(exp_sp, 0.0, {}, 0), doctest::Contains("beta"),
                       std::invalid_argument);
  const Spectrum poly_sp = build_spectrum(SpectralFamily::Polynomial, 4.0, 10, {}, 0);
  // (beta-1)/2 = 0.125 for theta = 4
  CHECK_THROWS_AS(build_true_function(poly_sp, 0.1, {}, 0), std::invalid_argument);
  CHECK_NOTHROW(build_true_function(poly_sp, 0.2, {}, 0));
}

TEST_CASE("null components are copied verbatim") {
  const Spectrum sp = explicit_spectrum({1.0});
  const TrueFunction tf =
      build_true_function(sp, 1.0, {}, 0, {0.5, -0.25}, CoefficientLaw::RandomSign, 1.0);
  REQUIRE(tf.null_components.size() == 2);
  CHECK(tf.null_components[0] == 0.5);
  CHECK(tf.null_components[1] == -0.25);
  CHECK(tf.norm_squared_null() == doctest::Approx(0.3125).epsilon(1e-15));
}

TEST_CASE("true function construction is deterministic") {
  const Spectrum sp = build_spectrum(SpectralFamily::Exponential, 1.5, 50, {0.9, 1.1}, 1);
  const TrueFunction a = build_true_function(sp, 1.2, {0.9, 1.1}, 2);
  const TrueFunction b = build_true_function(sp, 1.2, {0.9, 1.1}, 2);
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.signs == b.signs);
}
