#include "sobreg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sobreg/seeding.hpp"

namespace sobreg {

namespace {

double decay_value(SpectralFamily family, double theta, std::size_t i1based) {
  const double x = static_cast<double>(i1based);
  return family == SpectralFamily::Exponential ? std::exp(-theta * (x - 1.0))
                                               : std::pow(x, -theta);
}

void check_bounds(const PerturbationBounds& b) {
  if (!(b.a > 0.0) || !(b.a <= b.b)) {
    throw std::invalid_argument("perturbation bounds require 0 < a <= b, got a=" +
                                std::to_string(b.a) + " b=" + std::to_string(b.b));
  }
}

}  // namespace

double TrueFunction::norm_squared_fsoi() const {
  double s = 0.0;
  for (double c : coefficients) s += c * c;
  return s;
}

double TrueFunction::norm_squared_null() const {
  double s = 0.0;
  for (double d : null_components) s += d * d;
  return s;
}

Spectrum build_spectrum(SpectralFamily family, double theta, std::size_t n_modes,
                        PerturbationBounds bounds, std::uint64_t seed) {
  if (family == SpectralFamily::Explicit) {
    throw std::invalid_argument("build_spectrum requires Exponential or Polynomial family");
  }
  if (family == SpectralFamily::Exponential && !(theta > 0.0)) {
    throw std::invalid_argument("exponential decay requires theta > 0, got theta=" +
                                std::to_string(theta));
  }
  if (family == SpectralFamily::Polynomial && !(theta > 1.0)) {
    throw std::invalid_argument("polynomial decay requires theta > 1, got theta=" +
                                std::to_string(theta));
  }
  if (n_modes == 0) {
    throw std::invalid_argument("spectrum needs at least one mode");
  }
  check_bounds(bounds);

  // Monotonicity precondition: the worst draw (p_{i+1}^{-1}=b, p_i^{-1}=a)
  // must still satisfy b*f(i+1) <= a*f(i) for every retained i.
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n_modes; ++i) {
    min_ratio = std::min(min_ratio, decay_value(family, theta, i) /
                                        decay_value(family, theta, i + 1));
  }
  if (n_modes > 1 && bounds.b / bounds.a > min_ratio) {
    throw std::invalid_argument(
        "perturbation bounds can reorder eigenvalues: b/a=" +
        std::to_string(bounds.b / bounds.a) + " exceeds min f(i)/f(i+1)=" +
        std::to_string(min_ratio) + "; tighten (a, b) or lower N");
  }

  Spectrum sp;
  sp.family = family;
  sp.theta = theta;
  sp.bounds = bounds;
  sp.seed = seed;
  sp.eigenvalues.resize(n_modes);
  sp.p_inv.resize(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    const double u = uniform_at(seed, i);
    sp.p_inv[i] = bounds.a + (bounds.b - bounds.a) * u;
    sp.eigenvalues[i] = sp.p_inv[i] * decay_value(family, theta, i + 1);
  }

  for (std::size_t i = 0; i + 1 < n_modes; ++i) {
    if (sp.eigenvalues[i] < sp.eigenvalues[i + 1]) {
      throw std::logic_error("eigenvalue monotonicity violated after construction");
    }
  }
  return sp;
}

Spectrum explicit_spectrum(std::vector<double> eigenvalues) {
  if (eigenvalues.empty()) {
    throw std::invalid_argument("explicit spectrum needs at least one eigenvalue");
  }
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues[i] > 0.0)) {
      throw std::invalid_argument("explicit spectrum requires strictly positive eigenvalues");
    }
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
      throw std::invalid_argument("explicit spectrum must be non-increasing");
    }
  }
  Spectrum sp;
  sp.family = SpectralFamily::Explicit;
  sp.p_inv.assign(eigenvalues.size(), 1.0);
  sp.eigenvalues = std::move(eigenvalues);
  return sp;
}

double beta_of(SpectralFamily family, double theta) {
  switch (family) {
    case SpectralFamily::Exponential:
      return 1.0;
    case SpectralFamily::Polynomial:
      return 1.0 / theta + 1.0;
    default:
      throw std::invalid_argument(
          "beta is undefined for an Explicit spectrum; the caller must supply it");
  }
}

double beta_of(const Spectrum& spectrum) { return beta_of(spectrum.family, spectrum.theta); }

double smoothness_lower_bound(double beta) { return (beta - 1.0) / 2.0; }

TrueFunction build_true_function(const Spectrum& spectrum, double smoothness,
                                 PerturbationBounds bounds, std::uint64_t seed,
                                 std::vector<double> null_components,
                                 CoefficientLaw law,
                                 std::optional<double> beta_override) {
  check_bounds(bounds);
  std::optional<double> beta = beta_override;
  if (!beta && spectrum.family != SpectralFamily::Explicit) {
    beta = beta_of(spectrum);
  }
  if (beta) {
    const double lo = smoothness_lower_bound(*beta);
    if (!(smoothness > lo)) {
      throw std::invalid_argument("smoothness r=" + std::to_string(smoothness) +
                                  " must exceed (beta-1)/2 = " + std::to_string(lo));
    }
  } else if (!(smoothness > 0.0)) {
    throw std::invalid_argument("smoothness must be positive");
  }

  const std::size_t n = spectrum.size();
  TrueFunction tf;
  tf.smoothness = smoothness;
  tf.seed = seed;
  tf.bounds = bounds;
  tf.law = law;
  tf.null_components = std::move(null_components);
  tf.coefficients.resize(n);
  tf.coef_p_inv.resize(n);
  tf.signs.resize(n);

  // Two index-addressed substreams: one for magnitudes, one for signs.
  const std::uint64_t mag_seed = derive_seed(seed, "coef-magnitude");
  const std::uint64_t sign_seed = derive_seed(seed, "coef-sign");
  for (std::size_t i = 0; i < n; ++i) {
    double p_tilde;  // |c_i| = p_tilde * lambda_i^r
    if (law == CoefficientLaw::RandomSign) {
      tf.coef_p_inv[i] = bounds.a + (bounds.b - bounds.a) * uniform_at(mag_seed, i);
      p_tilde = 1.0 / tf.coef_p_inv[i];
    } else {
      p_tilde = 0.95 + 0.10 * uniform_at(mag_seed, i);
      tf.coef_p_inv[i] = 1.0 / p_tilde;
    }
    tf.signs[i] = uniform_at(sign_seed, i) < 0.5 ? -1 : 1;
    tf.coefficients[i] =
        tf.signs[i] * p_tilde * std::pow(spectrum.eigenvalues[i], smoothness);
    if (!std::isfinite(tf.coefficients[i])) {
      throw std::runtime_error("non-finite coefficient at mode " + std::to_string(i));
    }
  }
  return tf;
}

}  // namespace sobreg
