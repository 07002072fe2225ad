#include "sobreg/estimators.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace sobreg {

namespace {

void check_filter_params(double s, double lambda) {
  if (!(s >= 0.0)) throw std::invalid_argument("smoothing exponent s must be >= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("regularization strength lambda must be >= 0");
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

NoiseDraw sample_noise(double sigma, std::size_t n, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (n == 0) throw std::invalid_argument("noise draw needs at least one mode");
  NoiseDraw d;
  d.sigma = sigma;
  d.seed = seed;
  d.xi.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& x : d.xi) x = gauss(rng);
  return d;
}

ObservationCoefficients observe(const Spectrum& spectrum, const TrueFunction& truth,
                                const NoiseDraw& noise) {
  check_lengths(spectrum.size(), truth.coefficients.size(), "observe(spectrum, truth)");
  check_lengths(spectrum.size(), noise.xi.size(), "observe(spectrum, noise)");
  ObservationCoefficients obs;
  obs.sigma = noise.sigma;
  obs.b.resize(spectrum.size());
  for (std::size_t i = 0; i < obs.b.size(); ++i) {
    const double lam = spectrum.eigenvalues[i];
    obs.b[i] = lam * truth.coefficients[i] + noise.sigma * std::sqrt(lam) * noise.xi[i];
  }
  return obs;
}

EstimateCoefficients lse(const Spectrum& spectrum, const ObservationCoefficients& obs) {
  check_lengths(spectrum.size(), obs.b.size(), "lse");
  EstimateCoefficients est;
  est.s = 0.0;
  est.lambda = 0.0;
  est.a.resize(obs.b.size());
  for (std::size_t i = 0; i < obs.b.size(); ++i) {
    const double lam = spectrum.eigenvalues[i];
    if (!(lam > 0.0)) throw std::invalid_argument("lse requires strictly positive eigenvalues");
    est.a[i] = obs.b[i] / lam;
  }
  return est;
}

EstimateCoefficients regularize(const Spectrum& spectrum, const ObservationCoefficients& obs,
                                double s, double lambda) {
  check_filter_params(s, lambda);
  check_lengths(spectrum.size(), obs.b.size(), "regularize");
  if (lambda == 0.0) {
    auto est = lse(spectrum, obs);
    est.s = s;
    return est;
  }
  EstimateCoefficients est;
  est.s = s;
  est.lambda = lambda;
  est.a.resize(obs.b.size());
  for (std::size_t i = 0; i < obs.b.size(); ++i) {
    const double lam = spectrum.eigenvalues[i];
    est.a[i] = std::pow(lam, s) * obs.b[i] / (std::pow(lam, s + 1.0) + lambda);
  }
  return est;
}

double realized_error(const Spectrum& spectrum, const TrueFunction& truth,
                      const NoiseDraw& noise, double s, double lambda) {
  check_filter_params(s, lambda);
  check_lengths(spectrum.size(), truth.coefficients.size(), "realized_error(spectrum, truth)");
  check_lengths(spectrum.size(), noise.xi.size(), "realized_error(spectrum, noise)");
  double sum = truth.norm_squared_null();
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double lam = spectrum.eigenvalues[i];
    const double denom = std::pow(lam, s + 1.0) + lambda;
    const double num =
        noise.sigma * std::pow(lam, s + 0.5) * noise.xi[i] - lambda * truth.coefficients[i];
    if (denom == 0.0) {
      // lambda = 0 and lambda_i^{s+1} underflowed; fall back to the exact
      // lambda = 0 expression sigma * xi / sqrt(lambda_i).
      const double e = noise.sigma * noise.xi[i] / std::sqrt(lam);
      sum += e * e;
    } else {
      const double e = num / denom;
      sum += e * e;
    }
  }
  return sum;
}

double expected_error(const Spectrum& spectrum, const TrueFunction& truth, double sigma,
                      double s, double lambda) {
  check_filter_params(s, lambda);
  check_lengths(spectrum.size(), truth.coefficients.size(), "expected_error");
  double sum = truth.norm_squared_null();
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double lam = spectrum.eigenvalues[i];
    const double c = truth.coefficients[i];
    if (lambda == 0.0) {
      sum += sigma * sigma / lam;  // pure variance; bias vanishes at lambda = 0
      continue;
    }
    const double t = std::pow(lam, s + 1.0);
    const double denom = (t + lambda) * (t + lambda);
    sum += (sigma * sigma * std::pow(lam, 2.0 * s + 1.0) + lambda * lambda * c * c) / denom;
  }
  return sum;
}

FiniteRankReport finite_rank_bias_demo(const Spectrum& spectrum, const TrueFunction& truth,
                                       double eps_norm, std::span<const double> sigma_grid,
                                       double s, std::span<const double> lambda_grid) {
  if (spectrum.size() == 0) throw std::invalid_argument("finite-rank demo needs K >= 1 modes");
  if (!(eps_norm >= 0.0)) throw std::invalid_argument("perturbation norm must be >= 0");
  if (lambda_grid.empty() || sigma_grid.empty()) {
    throw std::invalid_argument("finite-rank demo needs non-empty sigma and lambda grids");
  }
  check_lengths(spectrum.size(), truth.coefficients.size(), "finite_rank_bias_demo");

  const std::size_t K = spectrum.size();
  const double lam_K = spectrum.eigenvalues[K - 1];
  const double lam_1 = spectrum.eigenvalues[0];
  const double phi_norm = std::sqrt(truth.norm_squared_fsoi());
  const double eps2 = eps_norm * eps_norm;

  FiniteRankReport rep;
  rep.l2_lower_bound = 2.0 * std::sqrt(static_cast<double>(K)) / lam_K * phi_norm * eps_norm;
  rep.all_l2_bounds_hold = true;
  rep.all_hs_bounds_hold = true;

  for (double sigma : sigma_grid) {
    FiniteRankRow row;
    row.sigma = sigma;
    double best_l2 = std::numeric_limits<double>::infinity();
    double best_hs = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_grid) {
      if (!(lambda > 0.0)) continue;
      double e_l2 = eps2 / (lambda * lambda);
      double e_hs = 0.0;
      for (std::size_t i = 0; i < K; ++i) {
        const double lam = spectrum.eigenvalues[i];
        const double c = truth.coefficients[i];
        const double d0 = lam + lambda;
        e_l2 += (sigma * sigma * lam + lambda * lambda * c * c) / (d0 * d0);
        const double t = std::pow(lam, s + 1.0);
        const double d1 = t + lambda;
        e_hs += (sigma * sigma * std::pow(lam, 2.0 * s + 1.0) + lambda * lambda * c * c) /
                (d1 * d1);
      }
      if (e_l2 < best_l2) {
        best_l2 = e_l2;
        row.l2_argmin = lambda;
      }
      if (e_hs < best_hs) {
        best_hs = e_hs;
        row.hs_argmin = lambda;
      }
    }
    row.l2_min_error = best_l2;
    row.hs_min_error = best_hs;

    // s-branch error at lambda = sigma, against its closed-form upper bound.
    double e_at_sigma = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      const double lam = spectrum.eigenvalues[i];
      const double c = truth.coefficients[i];
      const double d1 = std::pow(lam, s + 1.0) + sigma;
      e_at_sigma +=
          (sigma * sigma * std::pow(lam, 2.0 * s + 1.0) + sigma * sigma * c * c) / (d1 * d1);
    }
    row.hs_error_at_sigma = e_at_sigma;
    const double hs_upper = sigma * sigma * std::pow(lam_K, -2.0 * s - 2.0) *
                            (static_cast<double>(K) * std::pow(lam_1, 2.0 * s + 1.0) +
                             phi_norm * phi_norm);
    row.l2_bound_holds = row.l2_min_error >= rep.l2_lower_bound;
    row.hs_bound_holds = row.hs_error_at_sigma <= hs_upper;
    rep.all_l2_bounds_hold = rep.all_l2_bounds_hold && row.l2_bound_holds;
    rep.all_hs_bounds_hold = rep.all_hs_bounds_hold && row.hs_bound_holds;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace sobreg
