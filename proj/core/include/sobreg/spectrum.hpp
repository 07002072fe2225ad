#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sobreg {

enum class SpectralFamily { Exponential, Polynomial, Explicit };

/// Bounds (a, b) with 0 < a <= b on the inverse perturbations p_i^{-1}.
/// The default (1, 1) means no perturbation.
struct PerturbationBounds {
  double a = 1.0;
  double b = 1.0;
};

/// Descending positive eigenvalue sequence of a normal operator, either
/// synthetic (exponential e^{-theta(i-1)} or polynomial i^{-theta} decay,
/// times a bounded random perturbation) or explicitly supplied.
struct Spectrum {
  SpectralFamily family = SpectralFamily::Explicit;
  double theta = 0.0;                 // decay parameter; meaningless for Explicit
  std::vector<double> eigenvalues;    // lambda_1 >= ... >= lambda_N > 0
  std::vector<double> p_inv;          // p_i^{-1} in [a, b]
  PerturbationBounds bounds;
  std::uint64_t seed = 0;

  std::size_t size() const { return eigenvalues.size(); }
};

/// How the coefficient magnitudes/signs of a TrueFunction are drawn.
///  - RandomSign:    |c_i| = p~_i lambda_i^r with p~_i^{-1} ~ U[a,b], sign ~ U{-1,+1}
///  - MagnitudeBand: c_i = v_i lambda_i^r with |v_i| ~ U[0.95, 1.05], sign ~ U{-1,+1}
enum class CoefficientLaw { RandomSign, MagnitudeBand };

/// Ground-truth function in spectral coordinates: coefficients c_i against
/// the eigenbasis plus optional components d_j against the null-space basis.
struct TrueFunction {
  std::vector<double> coefficients;       // c_i
  std::vector<double> null_components;    // d_j (annihilated by the operator)
  double smoothness = 0.0;                // r
  std::vector<double> coef_p_inv;         // p~_i^{-1}
  std::vector<int> signs;                 // -1 or +1
  PerturbationBounds bounds;              // bounds the magnitudes were drawn under
  CoefficientLaw law{};                   // how magnitudes/signs were drawn
  std::uint64_t seed = 0;

  double norm_squared_fsoi() const;       // sum c_i^2
  double norm_squared_null() const;       // sum d_j^2
};

/// Builds an eigenvalue sequence lambda_i = p_i^{-1} f(i) with
/// f(x) = e^{-theta(x-1)} (Exponential, theta > 0) or x^{-theta}
/// (Polynomial, theta > 1), p_i^{-1} uniform in [a, b].
///
/// Construction rejects (a, b, theta, n) combinations for which some
/// perturbation draw could reorder the sequence; the i <-> lambda_i pairing
/// is load-bearing everywhere downstream, so sorting is not an option.
Spectrum build_spectrum(SpectralFamily family, double theta, std::size_t n_modes,
                        PerturbationBounds bounds, std::uint64_t seed);

/// Wraps an explicitly given descending positive sequence (e.g. a numerically
/// diagonalized operator) as a Spectrum with family Explicit and p == 1.
Spectrum explicit_spectrum(std::vector<double> eigenvalues);

/// Spectrum-decay constant unifying the two families:
/// 1 for exponential decay, 1/theta + 1 for polynomial decay.
double beta_of(SpectralFamily family, double theta);
double beta_of(const Spectrum& spectrum);  // throws for Explicit

/// Smallest admissible smoothness bound (beta - 1) / 2.
double smoothness_lower_bound(double beta);

/// Builds an r-smooth true function on `spectrum`: |c_i| = p~_i lambda_i^r.
/// `beta_override` supplies beta for Explicit spectra (the admissibility
/// check r > (beta-1)/2 is skipped when family is Explicit and no override
/// is given). `null_components` are copied verbatim.
TrueFunction build_true_function(const Spectrum& spectrum, double smoothness,
                                 PerturbationBounds bounds, std::uint64_t seed,
                                 std::vector<double> null_components = {},
                                 CoefficientLaw law = CoefficientLaw::RandomSign,
                                 std::optional<double> beta_override = std::nullopt);

}  // namespace sobreg
