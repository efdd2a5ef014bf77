#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invrof/fraccalc.hpp"
#include "invrof/generator.hpp"

namespace invrof {

// D_t^gamma (A u) = B A u + a u with Caputo derivative of order gamma in
// (0, 2] and initial data (A u)^(k)(0) = w_k for k < ceil(gamma).
struct FCProblem {
  GeneratorMatrix A;
  Eigen::MatrixXcd B;
  double a;
  double gamma;
  std::vector<Eigen::VectorXcd> initial_Au;  // w_k = A u_k
  std::vector<double> grid;                  // starts at 0, increasing
  int interpolation_order = 4;
  double residual_tolerance = 1e-5;
  // Starting weights for the t^(k + j gamma) expansion in the residual check.
  bool starting_terms = true;

  FCProblem(GeneratorMatrix A, Eigen::MatrixXcd B, double a, double gamma,
            std::vector<Eigen::VectorXcd> initial_Au, std::vector<double> grid);

  // Same problem with initial data given as u_k, mapped through w_k = A u_k.
  static FCProblem from_initial_u(GeneratorMatrix A, Eigen::MatrixXcd B, double a, double gamma,
                                  std::span<const Eigen::VectorXcd> initial_u,
                                  std::vector<double> grid);

  int order_ceil() const;
  // M = B + a A^{-1}, the generator of the transformed problem.
  Eigen::MatrixXcd transformed_generator() const;
  void validate() const;
};

// Solution of D^gamma v = M v with v^(k)(0) = w_k:
// v(t) = sum_k t^k E_{gamma,k+1}(t^gamma M) w_k.
Trajectory solve_transformed(const FCProblem& p);

struct SolutionBundle {
  Trajectory u;
  Trajectory v;          // v = A u
  Trajectory residual;   // 1x1 values ||D^gamma A u - B A u - a u||; NaN at t = 0
  double max_residual = 0.0;
  std::string warning;   // set when max_residual exceeds the tolerance
};

// u = A^{-1} v on the grid, with the residual of the original equation
// measured by a Caputo derivative of the sampled A u. For gamma = 1 the
// commutation B (I - A)^{-1} = (I - A)^{-1} B is required and checked.
SolutionBundle solve_unsolved_in_derivative(const FCProblem& p);

// Starting exponents k + j gamma of the small-t expansion of v.
StartingTerms solution_starting_terms(double gamma, int m);

// Example operator A = lambda I - L with L the n-point Dirichlet Laplacian
// on the unit interval (h = 1/(n+1)).
GeneratorMatrix shifted_negative_laplacian(int n, double lambda);

}  // namespace invrof
