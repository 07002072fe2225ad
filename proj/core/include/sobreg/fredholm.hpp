#pragma once

#include <span>
#include <vector>

#include "sobreg/spectrum.hpp"

namespace sobreg {

/// Uniform quadrature on [0, 1]: midpoint nodes, weights summing to one.
struct Mesh {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

Mesh uniform_mesh(std::size_t n_points);

/// Green's function of u'' + 4u = f on (0, 1) with u(0) = u(1) = 0:
///   -sin(2(1-y)) sin(2x) / (2 sin 2)  for x <= y, symmetric otherwise.
double greens_kernel(double x, double y);

/// Closed-form eigensystem of the testbed's normal operator:
/// eigenvalues 2 (4 - n^2 pi^2)^{-2}, eigenfunctions sqrt(2) sin(n pi x)
/// (unit-normalized in L2([0,1])).
struct AnalyticEigensystem {
  std::size_t n_modes = 0;

  double eigenvalue(std::size_t n) const;              // n is 1-based
  double eigenfunction(std::size_t n, double x) const; // n is 1-based
};

AnalyticEigensystem analytic_eigensystem(std::size_t n_modes);

/// Quadrature discretization of the integral equation testbed: the kernel
/// matrix, the normal kernel 2 * int K(x,w) K(w,z) dw, and its eigensystem
/// in the weighted inner product <u,v> = sum_j u_j v_j w_j. Modes below
/// rank_threshold * lambda_max are discarded.
struct FredholmProblem {
  Mesh mesh;
  std::vector<double> kernel;        // M x M row-major, K(x_i, x_j)
  std::vector<double> normal;        // M x M row-major, symmetrized normal kernel
  std::vector<double> eigenvalues;   // retained, descending
  std::vector<double> eigenvectors;  // rank x M row-major, orthonormal in <.,.>_w
  double rank_threshold = 1e-13;
  double max_asymmetry = 0.0;        // pre-symmetrization defect of `normal`
  double min_raw_eigenvalue = 0.0;   // smallest eigenvalue before the cutoff

  std::size_t rank() const { return eigenvalues.size(); }

  /// Retained spectrum as an Explicit-family Spectrum.
  Spectrum to_spectrum() const;

  /// Coefficients <f, v_i>_w of a grid function against the retained modes.
  std::vector<double> project(std::span<const double> grid_function) const;

  /// Grid values of sum_i coeffs[i] * v_i.
  std::vector<double> reconstruct(std::span<const double> coefficients) const;
};

FredholmProblem build_problem(std::size_t mesh_points, double rank_threshold = 1e-13);

}  // namespace sobreg
