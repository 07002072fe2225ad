#pragma once

#include <string>
#include <vector>

#include "sobreg/estimators.hpp"
#include "sobreg/spectrum.hpp"

namespace sobreg {

/// Logarithmically spaced candidate grid for the regularization strength.
struct LambdaGrid {
  double lo = 1e-25;
  double hi = 1e2;
  std::size_t count = 163;  // ~6 points per decade over the default range

  std::vector<double> points() const;
  void validate() const;
};

enum class SelectionMethod { Oracle, LCurve, Gcv };

const char* to_string(SelectionMethod m);

struct SelectionResult {
  double lambda_star = 0.0;
  SelectionMethod method = SelectionMethod::Oracle;
  std::vector<double> criterion_values;  // per grid point (error / curvature / GCV)
  std::vector<double> grid;              // the lambda grid the criterion was evaluated on
  std::vector<double> residual_norm;     // L-curve trace (empty otherwise)
  std::vector<double> solution_norm;
  bool boundary = false;                 // minimizer/corner clamped at a grid edge
  int corner_index = -1;
  int refine_iterations = 0;
};

/// Minimizer of the expected error over the grid, refined by golden-section
/// search in log(lambda) between the neighbors of the grid minimizer.
/// Knows the truth and sigma: this is the oracle selector.
SelectionResult oracle_lambda(const Spectrum& spectrum, const TrueFunction& truth,
                              double sigma, double s, const LambdaGrid& grid);

/// Residual of the critical-point equation lambda = sigma^2 * (-A'/2) / B1
/// satisfied by interior minimizers of the expected error. B1 uses the exact
/// coefficients c_i^2. Requires a truth without null components.
double critical_point_residual(const Spectrum& spectrum, const TrueFunction& truth,
                               double sigma, double s, double lambda);

/// L-curve corner selection: maximum signed discrete curvature (three-point
/// circumscribed-circle formula) of (log residual norm, log solution norm)
/// over the grid. Data-driven: never reads sigma or the truth.
/// `l2_solution_axis` switches the vertical axis from the penalty norm
/// ||.||_{H^s} (default) to the plain L2 norm.
SelectionResult lcurve_lambda(const Spectrum& spectrum, const ObservationCoefficients& obs,
                              double s, const LambdaGrid& grid, bool l2_solution_axis = false);

/// Generalized cross-validation: minimizes
///   G(lambda) = [sum (1-f_i)^2 b_i^2 / lambda_i] / [sum (1-f_i)]^2
/// with filter factors f_i = lambda_i^{s+1} / (lambda_i^{s+1} + lambda),
/// grid minimum refined by golden section. Data-driven like the L-curve.
SelectionResult gcv_lambda(const Spectrum& spectrum, const ObservationCoefficients& obs,
                           double s, const LambdaGrid& grid);

}  // namespace sobreg
