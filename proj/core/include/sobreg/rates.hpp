#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobreg/selection.hpp"
#include "sobreg/spectrum.hpp"

namespace sobreg {

/// Ordinary least squares of log(value) against log(x).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // in log space
  double r_squared = 0.0;
  std::size_t points_used = 0;
  std::vector<std::size_t> excluded;
};

/// `exclusions` are indices into the grids to drop (boundary-clamped or
/// failed points); they are recorded in the fit. All used values and
/// x-coordinates must be strictly positive, and >= 3 points must remain.
RateFit fit_rate(std::span<const double> x, std::span<const double> values,
                 const std::vector<std::size_t>& exclusions);

enum class RateRegime { OverSmoothing, UnderSmoothing, Threshold };

const char* to_string(RateRegime r);

/// Small-noise exponents of the oracle-optimal lambda and error:
///   over-smoothing  (s > r - (beta+1)/2): lambda ~ sigma^{(2s+2)/(2r+1)},
///                                         error  ~ sigma^{2 - 2beta/(2r+1)}
///   under-smoothing (s < r - (beta+1)/2): lambda ~ sigma^{(2s+2)/(2s+2+beta)},
///                                         error  ~ sigma^{2 - 2beta/(2s+2+beta)}
/// A +-0.05 guard band around the threshold returns Threshold (no exponents).
struct TheoreticalRates {
  RateRegime regime = RateRegime::Threshold;
  std::optional<double> lambda_exponent;
  std::optional<double> error_exponent;
  double threshold = 0.0;
};

TheoreticalRates theoretical_rates(double s, double r, double beta);

// ---------------------------------------------------------------------------
// sigma-sweep experiment with oracle selection (closed-form expected error)

struct OracleRateConfig {
  SpectralFamily family = SpectralFamily::Exponential;
  double theta = 1.5;
  std::size_t n_modes = 200;
  PerturbationBounds spectrum_bounds{};  // (1,1): p == 1
  PerturbationBounds coef_bounds{};      // (1,1): p~ == 1
  std::vector<double> r_values{0.7, 1.2, 1.7};
  std::vector<double> s_values{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75,
                               2.0, 2.25, 2.5, 2.75, 3.0};
  double sigma_lo = 1e-7;
  double sigma_hi = 1e-1;
  std::size_t sigma_count = 0;  // 0: 15 points per decade spanned
  LambdaGrid lambda_grid{};
  std::uint64_t master_seed = 0;
  std::size_t jobs = 1;
};

struct OracleRateRow {
  double r = 0.0;
  double s = 0.0;
  RateFit lambda_fit;
  RateFit error_fit;
  TheoreticalRates theory;
  std::vector<double> sigma;        // full sigma grid
  std::vector<double> lambda_star;  // oracle selection per sigma
  std::vector<double> error_star;   // expected error at lambda_star
  std::vector<std::size_t> excluded_sigma;  // boundary-clamped points
};

std::vector<OracleRateRow> run_oracle_rate_experiment(const OracleRateConfig& config);

// ---------------------------------------------------------------------------
// Fredholm testbed sweep with data-driven selectors

/// How the nominal sigma of the sweep maps to the spectral noise strength.
///  - RelativeMesh: sigma_spec = sigma * ||L phi*||_{L2} * sqrt(mean weight)
///    (iid noise of relative level sigma at each mesh node)
///  - Direct:       sigma_spec = sigma
enum class NoiseScale { RelativeMesh, Direct };

struct PracticalConfig {
  std::size_t mesh_points = 500;
  double rank_threshold = 1e-13;
  double smoothness = 1.5;
  double beta = 1.25;  // polynomial decay theta = 4 for this testbed
  std::vector<double> s_values{0.0, 1.0, 2.0};
  double sigma_lo = 1e-3;
  double sigma_hi = 0.31622776601683794;  // 10^{-0.5}
  std::size_t sigma_count = 26;
  std::size_t replicates = 20;
  std::vector<SelectionMethod> methods{SelectionMethod::Oracle, SelectionMethod::LCurve,
                                       SelectionMethod::Gcv};
  LambdaGrid lambda_grid{};
  NoiseScale noise_scale = NoiseScale::RelativeMesh;
  std::uint64_t master_seed = 0;
  std::size_t jobs = 1;
};

struct PracticalRow {
  double s = 0.0;
  double sigma = 0.0;          // nominal sigma of the sweep
  double sigma_spectral = 0.0; // strength actually injected
  SelectionMethod method = SelectionMethod::Oracle;
  std::size_t replicate = 0;
  double lambda = 0.0;
  double error = 0.0;          // realized squared L2 error at the selected lambda
  bool boundary = false;
  bool failed = false;
  std::string failure;
};

struct PracticalResult {
  std::vector<PracticalRow> rows;
  std::vector<double> sigma_grid;
  double noise_scale_factor = 1.0;  // sigma_spectral = factor * sigma
  std::size_t retained_modes = 0;
};

PracticalResult run_practical_experiment(const PracticalConfig& config);

// Summary checks of the qualitative selector behavior.
struct PracticalChecks {
  struct PerSigma {
    double sigma = 0.0;
    double value = 0.0;
    bool pass = false;
  };
  // median over replicates of (L-curve error / oracle error) at s = 1, per sigma
  std::vector<PerSigma> lcurve_error_ratio;
  bool lcurve_tracks_oracle = false;   // all medians <= 10
  // median per-replicate spread (max/min over the sigma sweep) of the
  // L-curve-selected lambda, s = 2 vs s = 1
  double lambda_spread_s2 = 0.0;
  double lambda_spread_s1 = 0.0;
  bool overs_smoothing_unstable = false;  // spread_s2 > spread_s1
  // median L-curve lambda vs oracle lambda at s = 0, per sigma
  std::vector<PerSigma> s0_lambda_ratio;  // value = median lcurve lambda / oracle lambda
  bool under_smoothing_undershoots = false;  // all ratios <= 1
};

PracticalChecks evaluate_practical_checks(const PracticalResult& result);

double median(std::vector<double> values);

}  // namespace sobreg
