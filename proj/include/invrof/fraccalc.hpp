#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace invrof {

// A sampled vector- or matrix-valued function on a grid starting at 0.
// Each value is stored as a matrix; vector trajectories have one column.
struct Trajectory {
  std::vector<double> grid;
  std::vector<Eigen::MatrixXcd> values;
  int interpolation_order = 1;

  Trajectory() = default;
  Trajectory(std::vector<double> grid, std::vector<Eigen::MatrixXcd> values,
             int interpolation_order);

  std::size_t size() const { return grid.size(); }
  Eigen::Index rows() const { return values.empty() ? 0 : values.front().rows(); }
  Eigen::Index cols() const { return values.empty() ? 0 : values.front().cols(); }
};

struct FracOrder {
  double order;
  int ceil_m;

  explicit FracOrder(double order);
};

std::vector<double> uniform_grid(double t_end, std::size_t intervals);

// Optional knowledge of the trajectory's behaviour at 0. Listing exponents
// sigma with f ~ sum c_sigma t^sigma lets the rules add starting weights that
// make them exact on those powers, restoring the full convergence order for
// functions such as Mittag-Leffler families.
struct StartingTerms {
  std::vector<double> exponents;
};

// Riemann-Liouville integral (g_a * f)(t_n) by product integration:
// piecewise Lagrange interpolation of degree interpolation_order with exact
// moments of the weakly singular kernel on the panels next to t_n and
// Gauss-Legendre on the remote ones.
Trajectory frac_integral(const Trajectory& f, FracOrder a, const StartingTerms& start = {});

// Caputo derivative: I^{m-a} applied to the m-th derivative of the
// interpolant. Requires interpolation_order >= ceil_m + 1.
Trajectory caputo_derivative(const Trajectory& f, FracOrder a, const StartingTerms& start = {});

// Riemann-Liouville derivative: the Caputo derivative plus the Taylor
// correction sum_k f^(k)(0) t^(k-a)/Gamma(k-a+1). At t = 0 the value is the
// limit when that correction vanishes and NaN otherwise.
Trajectory rl_derivative(const Trajectory& f, FracOrder a, const StartingTerms& start = {});

// k-th derivative at t = 0 estimated from the first interpolation_order + 1
// samples.
Eigen::MatrixXcd initial_derivative(const Trajectory& f, int k);

}  // namespace invrof
