#include <doctest.h>

#include <cmath>

#include "sobreg/estimators.hpp"
#include "sobreg/fredholm.hpp"
#include "sobreg/selection.hpp"
#include "sobreg/seeding.hpp"
#include "sobreg/spectrum.hpp"

using namespace sobreg;

namespace {

TrueFunction manual_truth(std::vector<double> c) {
  TrueFunction tf;
  tf.coef_p_inv.assign(c.size(), 1.0);
  tf.signs.assign(c.size(), 1);
  tf.smoothness = 1.0;
  tf.coefficients = std::move(c);
  return tf;
}

const FredholmProblem& shared_problem() {
  static const FredholmProblem p = build_problem(500, 1e-13);
  return p;
}

}  // namespace

TEST_CASE("lambda grid validation") {
  CHECK_THROWS_AS((LambdaGrid{1.0, 0.1, 10}.points()), std::invalid_argument);
  CHECK_THROWS_AS((LambdaGrid{0.0, 1.0, 10}.points()), std::invalid_argument);
  CHECK_THROWS_AS((LambdaGrid{1e-3, 1.0, 2}.points()), std::invalid_argument);
  const auto pts = LambdaGrid{1e-4, 1e2, 7}.points();
  REQUIRE(pts.size() == 7);
  CHECK(pts.front() == 1e-4);
  CHECK(pts.back() == 1e2);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
}

TEST_CASE("single-mode oracle selection hits lambda = sigma^2") {
  const Spectrum sp = explicit_spectrum({1.0});
  const auto tf = manual_truth({1.0});
  const LambdaGrid grid{1e-25, 1e2, 217};
  for (double sigma : {1e-1, 1e-2, 1e-3}) {
    const auto sel = oracle_lambda(sp, tf, sigma, 0.0, grid);
    CHECK_FALSE(sel.boundary);
    const double target = sigma * sigma;
    CHECK(std::abs(std::log(sel.lambda_star) - std::log(target)) <=
          1e-3 * std::abs(std::log(target)));
    // e(lambda*) = sigma^2 / (1 + sigma^2) at the exact critical point
    const double e = expected_error(sp, tf, sigma, 0.0, sel.lambda_star);
    CHECK(e == doctest::Approx(target / (1.0 + target)).epsilon(1e-6));
  }
}

TEST_CASE("oracle lambda scale covariance: doubling sigma quadruples lambda*") {
  const Spectrum sp = explicit_spectrum({1.0});
  const auto tf = manual_truth({1.0});
  const LambdaGrid grid{1e-25, 1e2, 217};
  const double l1 = oracle_lambda(sp, tf, 1e-2, 0.0, grid).lambda_star;
  const double l2 = oracle_lambda(sp, tf, 2e-2, 0.0, grid).lambda_star;
  CHECK(l2 / l1 == doctest::Approx(4.0).epsilon(5e-3));
}

TEST_CASE("oracle flags a boundary-clamped minimizer") {
  const Spectrum sp = explicit_spectrum({1.0});
  const auto tf = manual_truth({1.0});
  // variance dominates everywhere: minimizer pushed to the grid top
  const auto sel = oracle_lambda(sp, tf, 1e6, 0.0, LambdaGrid{1e-3, 1e2, 11});
  CHECK(sel.boundary);
  CHECK(sel.lambda_star == 1e2);
}

TEST_CASE("critical-point residual") {
  SUBCASE("vanishes at the single-mode critical point") {
    const Spectrum sp = explicit_spectrum({1.0});
    const auto tf = manual_truth({1.0});
    for (double sigma : {1e-1, 1e-2, 1e-3}) {
      CHECK(std::abs(critical_point_residual(sp, tf, sigma, 0.0, sigma * sigma)) <= 1e-12);
    }
  }
  SUBCASE("sign change brackets the oracle minimizer") {
    const Spectrum sp = build_spectrum(SpectralFamily::Exponential, 1.5, 60, {}, 0);
    const TrueFunction tf = build_true_function(sp, 1.2, {}, 1);
    const double sigma = 1e-3;
    const auto sel = oracle_lambda(sp, tf, sigma, 1.0, LambdaGrid{1e-25, 1e2, 217});
    REQUIRE_FALSE(sel.boundary);
    CHECK(critical_point_residual(sp, tf, sigma, 1.0, sel.lambda_star / 2.0) < 0.0);
    CHECK(critical_point_residual(sp, tf, sigma, 1.0, sel.lambda_star * 2.0) > 0.0);
    // consistency at the refined minimizer
    const double res = critical_point_residual(sp, tf, sigma, 1.0, sel.lambda_star);
    CHECK(std::abs(res) <= 1e-3 * sel.lambda_star);
  }
  SUBCASE("sigma = 0 leaves the bare lambda") {
    const Spectrum sp = explicit_spectrum({1.0, 0.5});
    const auto tf = manual_truth({1.0, 1.0});
    CHECK(critical_point_residual(sp, tf, 0.0, 1.0, 0.125) == doctest::Approx(0.125));
  }
  SUBCASE("rejects null components and degenerate truths") {
    const Spectrum sp = explicit_spectrum({1.0});
    auto tf = manual_truth({1.0});
    tf.null_components = {0.5};
    CHECK_THROWS_AS(critical_point_residual(sp, tf, 0.1, 0.0, 0.1), std::invalid_argument);
    const auto zero = manual_truth({0.0});
    CHECK_THROWS_AS(critical_point_residual(sp, zero, 0.1, 0.0, 0.1), std::runtime_error);
    CHECK_THROWS_AS(critical_point_residual(sp, manual_truth({1.0}), 0.1, 0.0, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("L-curve corner selection on the integral-equation testbed") {
  const auto& problem = shared_problem();
  const Spectrum sp = problem.to_spectrum();
  const TrueFunction tf =
      build_true_function(sp, 1.5, {}, derive_seed(7, "practical/truth"), {},
                          CoefficientLaw::MagnitudeBand, 1.25);
  // relative mesh noise at nominal sigma = 1e-2
  double signal2 = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    signal2 += sp.eigenvalues[i] * tf.coefficients[i] * tf.coefficients[i];
  }
  const double sigma = 1e-2 * std::sqrt(signal2) / std::sqrt(double(sp.size()));
  const NoiseDraw noise = sample_noise(sigma, sp.size(), 99);
  const auto obs = observe(sp, tf, noise);
  const LambdaGrid grid{1e-25, 1e2, 163};

  const auto lc = lcurve_lambda(sp, obs, 1.0, grid);
  const auto orc = oracle_lambda(sp, tf, sigma, 1.0, grid);
  CHECK(std::abs(std::log10(lc.lambda_star) - std::log10(orc.lambda_star)) <= 2.0);

  const auto gc = gcv_lambda(sp, obs, 1.0, grid);
  CHECK(std::abs(std::log10(gc.lambda_star) - std::log10(lc.lambda_star)) <= 2.0);

  // the data-driven traces are filled for the CSV dump
  CHECK(lc.residual_norm.size() == grid.count);
  CHECK(lc.solution_norm.size() == grid.count);
  CHECK(lc.corner_index > 0);
}

TEST_CASE("L-curve degenerate inputs") {
  const Spectrum sp = explicit_spectrum({1.0, 0.5, 0.25});
  ObservationCoefficients zero{{0.0, 0.0, 0.0}, 0.0};
  CHECK_THROWS_AS(lcurve_lambda(sp, zero, 1.0, LambdaGrid{1e-6, 1e2, 30}),
                  std::runtime_error);
  ObservationCoefficients obs{{1.0, 0.5, 0.1}, 0.0};
  CHECK_THROWS_AS(lcurve_lambda(sp, obs, -1.0, LambdaGrid{1e-6, 1e2, 30}),
                  std::invalid_argument);
}

TEST_CASE("GCV criterion") {
  SUBCASE("flat tail at huge lambda approaches sum(b^2/lambda)/N^2") {
    const Spectrum sp = explicit_spectrum({1.0, 0.5, 0.25});
    ObservationCoefficients obs{{0.3, -0.2, 0.1}, 0.0};
    const auto sel = gcv_lambda(sp, obs, 0.0, LambdaGrid{1e-6, 1e12, 40});
    const double tail = sel.criterion_values.back();
    double expect = 0.0;
    for (std::size_t i = 0; i < 3; ++i) expect += obs.b[i] * obs.b[i] / sp.eigenvalues[i];
    expect /= 9.0;
    CHECK(tail == doctest::Approx(expect).epsilon(1e-6));
  }
  SUBCASE("single mode is rejected: the criterion is constant") {
    const Spectrum sp = explicit_spectrum({1.0});
    ObservationCoefficients obs{{1.0}, 0.0};
    CHECK_THROWS_AS(gcv_lambda(sp, obs, 0.0, LambdaGrid{1e-6, 1e2, 20}), std::runtime_error);
  }
}

TEST_CASE("selection results are reproducible") {
  const Spectrum sp = build_spectrum(SpectralFamily::Exponential, 1.5, 40, {}, 0);
  const TrueFunction tf = build_true_function(sp, 1.2, {}, 1);
  const auto obs = observe(sp, tf, sample_noise(1e-3, 40, 5));
  const LambdaGrid grid{1e-20, 1e2, 100};
  const auto a = lcurve_lambda(sp, obs, 1.0, grid);
  const auto b = lcurve_lambda(sp, obs, 1.0, grid);
  CHECK(a.lambda_star == b.lambda_star);
  CHECK(a.corner_index == b.corner_index);
}
