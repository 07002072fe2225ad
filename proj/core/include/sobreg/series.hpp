#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobreg/spectrum.hpp"

namespace sobreg {

/// Which closed-form regime of the Riemann-integral approximation applies.
enum class AsymptoticBranch { PowerLaw, Logarithmic, Constant };

const char* to_string(AsymptoticBranch b);

struct JClosedForm {
  double value = 0.0;
  AsymptoticBranch branch = AsymptoticBranch::PowerLaw;
  double gamma = 0.0;
};

/// Direct summation of F_s(lambda; k, alpha) = sum_i (lambda_i^{s+1} + lambda)^{-k} lambda_i^alpha
/// over the retained modes. Terms are accumulated in descending magnitude
/// with compensated summation.
double f_series(const Spectrum& spectrum, double s, double k, double alpha, double lambda);

/// Weighted variant: each term is multiplied by weights[i] (used for the
/// series that carry the squared coefficient perturbations).
double f_series_weighted(const Spectrum& spectrum, std::span<const double> weights, double s,
                         double k, double alpha, double lambda);

/// Closed-form small-lambda value of the integral approximating F_s:
///   gamma = (alpha - beta + 1) / (s + 1),  c = C1^{s+1} (1 when p == 1)
///   0 < gamma < k : c^{gamma-k}/(s+1) * G(gamma)G(k-gamma)/G(k) * lambda^{gamma-k}
///   gamma = k     : ln(1/lambda) / (s+1)
///   gamma > k     : 1 / ((s+1)(gamma-k))
/// Multiply by C = C1^{(s+1)k} C2^{-alpha} / theta to approximate F_s itself.
JClosedForm j_closed_form(double s, double k, double alpha, double theta,
                          SpectralFamily family, double lambda, double c = 1.0);

/// One series together with its predicted leading-order behavior.
struct SeriesEstimate {
  double direct_sum = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<double> exponent;    // predicted d log / d log lambda (0 on the constant branch)
  std::optional<double> asymptotic;  // leading-term value C * J(lambda), p == 1 constants
  std::optional<AsymptoticBranch> branch;
};

struct DominatingTerms {
  SeriesEstimate A;             // F_s(lambda; 2, 2s+1)
  SeriesEstimate A_prime_half;  // -A'/2 = F_s(lambda; 3, 2s+1)
  SeriesEstimate B;             // sum (t_i+lambda)^{-2} lambda_i^{2r} p~_i^2
  SeriesEstimate B1;            // sum (t_i+lambda)^{-3} lambda_i^{s+1+2r} p~_i^2
  double threshold = 0.0;       // r - (beta+1)/2, when beta is known
  bool threshold_guard = false; // |s - threshold| < 0.05: no B/B1 prediction
};

/// Evaluates the four error-series at one lambda and attaches leading-order
/// predictions where the decay family admits them.
DominatingTerms dominating_terms(const Spectrum& spectrum, const TrueFunction& truth,
                                 double s, double lambda);

struct SlopeCheck {
  std::string name;
  double fitted_slope = 0.0;
  std::optional<double> predicted_slope;
  std::optional<double> deviation;
};

struct OrderReport {
  std::vector<SlopeCheck> checks;
  double threshold = 0.0;
  bool threshold_guard = false;
  bool truncation_checked = false;
  double truncation_rel_change = 0.0;  // relative change of A at the smallest lambda when N doubles
};

/// Fits log-log slopes of the four series over a lambda grid and compares
/// them with the predicted exponents. For synthetic spectra the truncation
/// adequacy is checked by rebuilding at 2N and re-summing at the smallest
/// lambda of the grid.
OrderReport verify_dominating_order(const Spectrum& spectrum, const TrueFunction& truth,
                                    double s, std::span<const double> lambda_grid);

}  // namespace sobreg
