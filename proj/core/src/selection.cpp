#include "sobreg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sobreg {

namespace {

constexpr double kGoldenTolLog = 1e-3;  // width tolerance in ln(lambda)
constexpr int kGoldenMaxIter = 60;

struct GoldenResult {
  double x = 0.0;  // position of the minimum, in ln(lambda)
  int iterations = 0;
};

GoldenResult golden_section_min(const std::function<double(double)>& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  while (b - a > kGoldenTolLog && it < kGoldenMaxIter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
    ++it;
  }
  return {0.5 * (a + b), it};
}

// Per-mode powers reused across a whole grid sweep.
struct FilterWorkspace {
  std::vector<double> t;    // lambda_i^{s+1}
  std::vector<double> ls;   // lambda_i^{s}
  std::vector<double> var;  // lambda_i^{2s+1}

  FilterWorkspace(const Spectrum& sp, double s) {
    const std::size_t n = sp.size();
    t.resize(n);
    ls.resize(n);
    var.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lam = sp.eigenvalues[i];
      ls[i] = std::pow(lam, s);
      t[i] = ls[i] * lam;       // lambda^{s+1}
      var[i] = t[i] * ls[i];    // lambda^{2s+1}
    }
  }
};

double expected_error_ws(const FilterWorkspace& ws, const TrueFunction& truth, double sigma,
                         double lambda) {
  double sum = truth.norm_squared_null();
  const double s2 = sigma * sigma;
  for (std::size_t i = 0; i < ws.t.size(); ++i) {
    const double c = truth.coefficients[i];
    const double d = ws.t[i] + lambda;
    sum += (s2 * ws.var[i] + lambda * lambda * c * c) / (d * d);
  }
  return sum;
}

}  // namespace

void LambdaGrid::validate() const {
  if (!(lo > 0.0) || !(lo < hi)) {
    throw std::invalid_argument("lambda grid requires 0 < lo < hi");
  }
  if (count < 3) throw std::invalid_argument("lambda grid needs at least 3 points");
}

std::vector<double> LambdaGrid::points() const {
  validate();
  std::vector<double> pts(count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t j = 0; j < count; ++j) {
    pts[j] = std::exp(llo + (lhi - llo) * static_cast<double>(j) /
                                static_cast<double>(count - 1));
  }
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

const char* to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::Oracle: return "oracle";
    case SelectionMethod::LCurve: return "lcurve";
    case SelectionMethod::Gcv: return "gcv";
  }
  return "?";
}

SelectionResult oracle_lambda(const Spectrum& spectrum, const TrueFunction& truth,
                              double sigma, double s, const LambdaGrid& grid) {
  if (!(sigma > 0.0)) throw std::invalid_argument("oracle selection requires sigma > 0");
  SelectionResult res;
  res.method = SelectionMethod::Oracle;
  res.grid = grid.points();
  res.criterion_values.resize(res.grid.size());

  FilterWorkspace ws(spectrum, s);
  std::size_t jmin = 0;
  for (std::size_t j = 0; j < res.grid.size(); ++j) {
    res.criterion_values[j] = expected_error_ws(ws, truth, sigma, res.grid[j]);
    if (res.criterion_values[j] < res.criterion_values[jmin]) jmin = j;
  }
  res.corner_index = static_cast<int>(jmin);

  if (jmin == 0 || jmin + 1 == res.grid.size()) {
    res.boundary = true;
    res.lambda_star = res.grid[jmin];
    return res;
  }
  auto eval = [&](double x) { return expected_error_ws(ws, truth, sigma, std::exp(x)); };
  const GoldenResult g =
      golden_section_min(eval, std::log(res.grid[jmin - 1]), std::log(res.grid[jmin + 1]));
  res.lambda_star = std::exp(g.x);
  res.refine_iterations = g.iterations;
  return res;
}

double critical_point_residual(const Spectrum& spectrum, const TrueFunction& truth,
                               double sigma, double s, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("critical-point residual requires lambda > 0");
  if (truth.norm_squared_null() != 0.0) {
    throw std::invalid_argument("critical-point equation assumes no null components");
  }
  FilterWorkspace ws(spectrum, s);
  double a_prime_half = 0.0;  // -A'/2 = sum (t_i + lambda)^{-3} lambda_i^{2s+1}
  double b1 = 0.0;            // B1    = sum (t_i + lambda)^{-3} t_i c_i^2
  for (std::size_t i = 0; i < ws.t.size(); ++i) {
    const double d = ws.t[i] + lambda;
    const double d3 = d * d * d;
    const double c = truth.coefficients[i];
    a_prime_half += ws.var[i] / d3;
    b1 += ws.t[i] * c * c / d3;
  }
  if (b1 == 0.0) throw std::runtime_error("B1 vanishes; critical-point equation is degenerate");
  return lambda - sigma * sigma * a_prime_half / b1;
}

SelectionResult lcurve_lambda(const Spectrum& spectrum, const ObservationCoefficients& obs,
                              double s, const LambdaGrid& grid, bool l2_solution_axis) {
  if (!(s >= 0.0)) throw std::invalid_argument("smoothing exponent s must be >= 0");
  if (spectrum.size() != obs.b.size()) {
    throw std::invalid_argument("lcurve: observation length does not match spectrum");
  }
  SelectionResult res;
  res.method = SelectionMethod::LCurve;
  res.grid = grid.points();
  const std::size_t n = res.grid.size();
  if (n < 3) throw std::invalid_argument("lcurve needs at least 3 grid points");

  double bnorm = 0.0;
  for (double b : obs.b) bnorm += b * b;
  if (bnorm == 0.0) {
    throw std::runtime_error("degenerate L-curve: zero observation");
  }

  FilterWorkspace ws(spectrum, s);
  std::vector<double> rho(n), eta(n);
  res.residual_norm.resize(n);
  res.solution_norm.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = res.grid[j];
    double res2 = 0.0, sol2 = 0.0;
    for (std::size_t i = 0; i < ws.t.size(); ++i) {
      const double lam = spectrum.eigenvalues[i];
      const double d = ws.t[i] + lambda;
      const double one_minus_f = lambda / d;
      const double miss = one_minus_f * obs.b[i];
      res2 += miss * miss / lam;
      const double a = ws.ls[i] * obs.b[i] / d;
      sol2 += l2_solution_axis ? a * a : a * a / ws.ls[i];
    }
    res.residual_norm[j] = std::sqrt(res2);
    res.solution_norm[j] = std::sqrt(sol2);
    rho[j] = 0.5 * std::log(std::max(res2, std::numeric_limits<double>::min()));
    eta[j] = 0.5 * std::log(std::max(sol2, std::numeric_limits<double>::min()));
  }

  // Signed Menger curvature of the discrete curve, points ordered by
  // increasing lambda. The under-to-over-regularization corner turns
  // counterclockwise (positive); the noise-interpolation bend at the far
  // left turns clockwise and can never win the signed maximum.
  res.criterion_values.assign(n, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  int best_j = -1;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double ux = rho[j] - rho[j - 1], uy = eta[j] - eta[j - 1];
    const double vx = rho[j + 1] - rho[j], vy = eta[j + 1] - eta[j];
    const double wx = rho[j + 1] - rho[j - 1], wy = eta[j + 1] - eta[j - 1];
    const double denom = std::hypot(ux, uy) * std::hypot(vx, vy) * std::hypot(wx, wy);
    if (denom == 0.0) continue;
    const double kappa = 2.0 * (ux * vy - uy * vx) / denom;
    res.criterion_values[j] = kappa;
    if (kappa > best) {
      best = kappa;
      best_j = static_cast<int>(j);
    }
  }
  if (best_j < 0) {
    throw std::runtime_error("degenerate L-curve: no usable curvature (flat curve)");
  }
  res.corner_index = best_j;
  res.lambda_star = res.grid[best_j];
  res.boundary = (best_j == 1 || best_j + 2 == static_cast<int>(n));
  return res;
}

SelectionResult gcv_lambda(const Spectrum& spectrum, const ObservationCoefficients& obs,
                           double s, const LambdaGrid& grid) {
  if (!(s >= 0.0)) throw std::invalid_argument("smoothing exponent s must be >= 0");
  if (spectrum.size() != obs.b.size()) {
    throw std::invalid_argument("gcv: observation length does not match spectrum");
  }
  if (spectrum.size() < 2) {
    throw std::runtime_error("GCV is undefined for a single mode (criterion is constant)");
  }
  SelectionResult res;
  res.method = SelectionMethod::Gcv;
  res.grid = grid.points();
  const std::size_t n = res.grid.size();

  FilterWorkspace ws(spectrum, s);
  auto gcv_value = [&](double lambda) {
    double num = 0.0, trace = 0.0;
    for (std::size_t i = 0; i < ws.t.size(); ++i) {
      const double lam = spectrum.eigenvalues[i];
      const double one_minus_f = lambda / (ws.t[i] + lambda);
      const double miss = one_minus_f * obs.b[i];
      num += miss * miss / lam;
      trace += one_minus_f;
    }
    if (trace <= 0.0) return std::numeric_limits<double>::infinity();
    return num / (trace * trace);
  };

  res.criterion_values.resize(n);
  res.residual_norm.assign(n, 0.0);
  res.solution_norm.assign(n, 0.0);
  std::size_t jmin = 0;
  std::size_t usable = 0;
  for (std::size_t j = 0; j < n; ++j) {
    res.criterion_values[j] = gcv_value(res.grid[j]);
    if (std::isfinite(res.criterion_values[j])) ++usable;
    if (res.criterion_values[j] < res.criterion_values[jmin]) jmin = j;
  }
  if (usable == 0 || !std::isfinite(res.criterion_values[jmin])) {
    throw std::runtime_error("GCV denominator underflowed on the whole grid");
  }
  const double vmin = *std::min_element(res.criterion_values.begin(), res.criterion_values.end());
  const double vmax = *std::max_element(res.criterion_values.begin(), res.criterion_values.end());
  if (vmin == vmax) {
    throw std::runtime_error("GCV criterion is constant over the grid; selection undefined");
  }
  res.corner_index = static_cast<int>(jmin);
  if (jmin == 0 || jmin + 1 == n) {
    res.boundary = true;
    res.lambda_star = res.grid[jmin];
    return res;
  }
  const GoldenResult g = golden_section_min(
      [&](double x) { return gcv_value(std::exp(x)); }, std::log(res.grid[jmin - 1]),
      std::log(res.grid[jmin + 1]));
  res.lambda_star = std::exp(g.x);
  res.refine_iterations = g.iterations;
  return res;
}

}  // namespace sobreg
