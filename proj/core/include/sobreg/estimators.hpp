#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sobreg/spectrum.hpp"

namespace sobreg {

/// One Gaussian noise realization: xi_i iid standard normal, strength sigma.
/// The spectral noise coordinates are sigma * sqrt(lambda_i) * xi_i.
struct NoiseDraw {
  double sigma = 0.0;
  std::vector<double> xi;
  std::uint64_t seed = 0;
};

/// Spectral coordinates b_i = lambda_i c_i + sigma sqrt(lambda_i) xi_i of the
/// observed right-hand side. Null components never enter b.
struct ObservationCoefficients {
  std::vector<double> b;
  double sigma = 0.0;
};

/// Coefficients of a (regularized) estimate against the eigenbasis.
struct EstimateCoefficients {
  std::vector<double> a;
  double s = 0.0;
  double lambda = 0.0;
};

NoiseDraw sample_noise(double sigma, std::size_t n, std::uint64_t seed);

ObservationCoefficients observe(const Spectrum& spectrum, const TrueFunction& truth,
                                const NoiseDraw& noise);

/// Plain least squares a_i = b_i / lambda_i. Recovers the identifiable part
/// exactly when sigma = 0; variance is sigma^2 sum 1/lambda_i otherwise.
EstimateCoefficients lse(const Spectrum& spectrum, const ObservationCoefficients& obs);

/// Smoothness-s regularized estimate a_i = lambda_i^s b_i / (lambda_i^{s+1} + lambda).
/// s = 0 is the classic Tikhonov filter restricted to the identifiable span;
/// lambda = 0 degenerates to lse (allowed since all retained lambda_i > 0).
EstimateCoefficients regularize(const Spectrum& spectrum, const ObservationCoefficients& obs,
                                double s, double lambda);

/// Squared L2 error of the regularized estimate for one noise realization:
///   sum_i (lambda_i^{s+1} + lambda)^{-2} (sigma lambda_i^{s+1/2} xi_i - lambda c_i)^2
///   + sum_j d_j^2.
double realized_error(const Spectrum& spectrum, const TrueFunction& truth,
                      const NoiseDraw& noise, double s, double lambda);

/// Expectation of realized_error over the noise:
///   e(lambda; s) = sum_i (lambda_i^{s+1} + lambda)^{-2}
///                  (sigma^2 lambda_i^{2s+1} + lambda^2 c_i^2)  [+ sum_j d_j^2].
/// The null-space offset is included whenever the truth carries one.
double expected_error(const Spectrum& spectrum, const TrueFunction& truth, double sigma,
                      double s, double lambda);

/// Finite-rank comparison of the plain-L2 and smoothness-s regularizers when
/// the observation is polluted by a null-space perturbation of norm eps_norm.
struct FiniteRankRow {
  double sigma = 0.0;
  double l2_min_error = 0.0;       // min over the grid of the polluted L2-branch error
  double l2_argmin = 0.0;
  double hs_min_error = 0.0;       // min over the grid of the s-branch error
  double hs_argmin = 0.0;
  double hs_error_at_sigma = 0.0;  // s-branch error evaluated at lambda = sigma
  bool l2_bound_holds = false;     // l2_min_error >= 2 sqrt(K) ||phi*|| ||eps|| / lambda_K
  bool hs_bound_holds = false;     // hs_error_at_sigma <= upper bound at lambda = sigma
};

struct FiniteRankReport {
  double l2_lower_bound = 0.0;
  std::vector<FiniteRankRow> rows;
  bool all_l2_bounds_hold = false;
  bool all_hs_bounds_hold = false;
};

/// `spectrum` must carry exactly the K positive eigenvalues; the truth lives
/// on those modes and eps_norm > 0 is the norm of the null-space pollution.
FiniteRankReport finite_rank_bias_demo(const Spectrum& spectrum, const TrueFunction& truth,
                                       double eps_norm, std::span<const double> sigma_grid,
                                       double s, std::span<const double> lambda_grid);

}  // namespace sobreg
