#include "sobreg/fredholm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sobreg {

Mesh uniform_mesh(std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("mesh needs at least 2 points");
  Mesh m;
  m.points.resize(n_points);
  m.weights.assign(n_points, 1.0 / static_cast<double>(n_points));
  for (std::size_t j = 0; j < n_points; ++j) {
    m.points[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(n_points);
  }
  return m;
}

double greens_kernel(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::invalid_argument("greens_kernel arguments must lie in [0, 1]");
  }
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  return -std::sin(2.0 * (1.0 - hi)) * std::sin(2.0 * lo) / (2.0 * std::sin(2.0));
}

double AnalyticEigensystem::eigenvalue(std::size_t n) const {
  if (n < 1 || n > n_modes) throw std::invalid_argument("mode index out of range");
  const double d = 4.0 - static_cast<double>(n) * static_cast<double>(n) *
                             std::numbers::pi * std::numbers::pi;
  return 2.0 / (d * d);
}

double AnalyticEigensystem::eigenfunction(std::size_t n, double x) const {
  if (n < 1 || n > n_modes) throw std::invalid_argument("mode index out of range");
  return std::numbers::sqrt2 * std::sin(static_cast<double>(n) * std::numbers::pi * x);
}

AnalyticEigensystem analytic_eigensystem(std::size_t n_modes) {
  if (n_modes < 1) throw std::invalid_argument("need at least one analytic mode");
  return AnalyticEigensystem{n_modes};
}

FredholmProblem build_problem(std::size_t mesh_points, double rank_threshold) {
  if (mesh_points < 2) throw std::invalid_argument("need at least 2 mesh points");
  if (!(rank_threshold > 0.0 && rank_threshold < 1.0)) {
    throw std::invalid_argument("rank threshold must lie in (0, 1)");
  }

  FredholmProblem p;
  p.mesh = uniform_mesh(mesh_points);
  p.rank_threshold = rank_threshold;
  const auto m = static_cast<Eigen::Index>(mesh_points);

  Eigen::MatrixXd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      K(i, j) = greens_kernel(p.mesh.points[i], p.mesh.points[j]);
    }
  }

  // Normal kernel 2 * int K(x,w) K(w,z) dw by quadrature. The factor 2 is the
  // data-space inner-product convention under which the analytic eigenvalues
  // are 2 (4 - n^2 pi^2)^{-2}.
  const double w = p.mesh.weights[0];
  Eigen::MatrixXd G = 2.0 * w * (K * K);

  p.max_asymmetry = (G - G.transpose()).cwiseAbs().maxCoeff();
  const double scale = G.cwiseAbs().maxCoeff();
  if (p.max_asymmetry > 1e-10 * scale) {
    throw std::runtime_error("normal kernel asymmetry " + std::to_string(p.max_asymmetry) +
                             " exceeds 1e-10 relative");
  }
  G = 0.5 * (G + G.transpose()).eval();

  // Weighted eigenproblem: diagonalize W^{1/2} G W^{1/2} (= G * w for a
  // uniform mesh), then map eigenvectors back to grid functions.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G * w);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed on the normal kernel");
  }

  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  p.min_raw_eigenvalue = ev(0);
  const double ev_max = ev(m - 1);
  if (!(ev_max > 0.0)) throw std::runtime_error("normal kernel has no positive eigenvalues");
  if (p.min_raw_eigenvalue < -1e-10 * ev_max) {
    throw std::runtime_error("normal kernel is not positive semi-definite: min eigenvalue " +
                             std::to_string(p.min_raw_eigenvalue));
  }

  const double cutoff = rank_threshold * ev_max;
  const double inv_sqrt_w = 1.0 / std::sqrt(w);
  for (Eigen::Index k = m - 1; k >= 0; --k) {
    if (!(ev(k) >= cutoff)) break;
    p.eigenvalues.push_back(ev(k));
    Eigen::VectorXd v = solver.eigenvectors().col(k) * inv_sqrt_w;
    // deterministic sign: largest-magnitude entry positive
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    for (Eigen::Index j = 0; j < m; ++j) p.eigenvectors.push_back(v(j));
  }
  if (p.eigenvalues.empty()) {
    throw std::runtime_error("all eigenvalues fell below the rank cutoff");
  }

  p.kernel.assign(K.data(), K.data() + m * m);  // column-major == row-major (symmetric)
  p.normal.assign(G.data(), G.data() + m * m);
  return p;
}

Spectrum FredholmProblem::to_spectrum() const { return explicit_spectrum(eigenvalues); }

std::vector<double> FredholmProblem::project(std::span<const double> grid_function) const {
  if (grid_function.size() != mesh.size()) {
    throw std::invalid_argument("project: grid function length does not match mesh");
  }
  std::vector<double> coeffs(rank(), 0.0);
  for (std::size_t i = 0; i < rank(); ++i) {
    double acc = 0.0;
    const double* v = &eigenvectors[i * mesh.size()];
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      acc += grid_function[j] * v[j] * mesh.weights[j];
    }
    coeffs[i] = acc;
  }
  return coeffs;
}

std::vector<double> FredholmProblem::reconstruct(std::span<const double> coefficients) const {
  if (coefficients.size() != rank()) {
    throw std::invalid_argument("reconstruct: coefficient length does not match rank");
  }
  std::vector<double> grid(mesh.size(), 0.0);
  for (std::size_t i = 0; i < rank(); ++i) {
    const double c = coefficients[i];
    if (c == 0.0) continue;
    const double* v = &eigenvectors[i * mesh.size()];
    for (std::size_t j = 0; j < mesh.size(); ++j) grid[j] += c * v[j];
  }
  return grid;
}

}  // namespace sobreg
