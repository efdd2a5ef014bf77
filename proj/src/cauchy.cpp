#include "invrof/cauchy.hpp"

#include <algorithm>
#include <cmath>

#include "invrof/error.hpp"
#include "invrof/rof.hpp"

namespace invrof {

FCProblem::FCProblem(GeneratorMatrix A_, Eigen::MatrixXcd B_, double a_, double gamma_,
                     std::vector<Eigen::VectorXcd> initial_Au_, std::vector<double> grid_)
    : A(std::move(A_)),
      B(std::move(B_)),
      a(a_),
      gamma(gamma_),
      initial_Au(std::move(initial_Au_)),
      grid(std::move(grid_)) {
  validate();
}

FCProblem FCProblem::from_initial_u(GeneratorMatrix A, Eigen::MatrixXcd B, double a, double gamma,
                                    std::span<const Eigen::VectorXcd> initial_u,
                                    std::vector<double> grid) {
  std::vector<Eigen::VectorXcd> w;
  for (const auto& u : initial_u) {
    if (u.size() != A.dim()) throw DomainError("FCProblem: initial datum has the wrong size");
    w.emplace_back(A.entries() * u);
  }
  return FCProblem(std::move(A), std::move(B), a, gamma, std::move(w), std::move(grid));
}

int FCProblem::order_ceil() const { return int(std::ceil(gamma - 1e-12)); }

Eigen::MatrixXcd FCProblem::transformed_generator() const { return B + a * A.inverse_entries(); }

void FCProblem::validate() const {
  if (!(gamma > 0.0 && gamma <= 2.0)) throw DomainError("FCProblem: gamma must lie in (0, 2]");
  if (!(a >= 0.0)) throw DomainError("FCProblem: a must be nonnegative");
  if (!A.injective()) throw HypothesisViolation("FCProblem: A must be injective");
  if (B.rows() != A.dim() || B.cols() != A.dim())
    throw DomainError("FCProblem: B must match the size of A");
  if (int(initial_Au.size()) != order_ceil())
    throw DomainError("FCProblem: need ceil(gamma) initial data");
  for (const auto& w : initial_Au)
    if (w.size() != A.dim()) throw DomainError("FCProblem: initial datum has the wrong size");
  if (grid.size() < 2 || grid.front() != 0.0 || !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw DomainError("FCProblem: grid must start at 0 and increase strictly");
  if (!(residual_tolerance > 0.0)) throw DomainError("FCProblem: tolerance must be positive");
}

StartingTerms solution_starting_terms(double gamma, int m) {
  StartingTerms s;
  for (int k = 0; k < m; ++k)
    for (int j = 0; k + j * gamma < 6.0; ++j) s.exponents.push_back(k + j * gamma);
  std::sort(s.exponents.begin(), s.exponents.end());
  return s;
}

Trajectory solve_transformed(const FCProblem& p) {
  p.validate();
  const GeneratorMatrix M(p.transformed_generator(), 0.0);
  std::vector<ROFFamily> terms;
  for (int k = 0; k < p.order_ceil(); ++k) terms.emplace_back(M, ROFParams(p.gamma, double(k)));
  std::vector<Eigen::MatrixXcd> values;
  values.reserve(p.grid.size());
  for (double t : p.grid) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(p.A.dim());
    for (int k = 0; k < p.order_ceil(); ++k) v += rof_apply(terms[k], t, p.initial_Au[k]);
    values.emplace_back(std::move(v));
  }
  return Trajectory(p.grid, std::move(values), p.interpolation_order);
}

SolutionBundle solve_unsolved_in_derivative(const FCProblem& p) {
  p.validate();
  if (p.gamma == 1.0) {
    const Eigen::MatrixXcd R = resolvent(p.A, 1.0);
    const double scale = p.B.norm() * R.norm();
    if ((p.B * R - R * p.B).norm() > 1e-10 * std::max(scale, 1e-300))
      throw CommutationViolation("solve: B does not commute with (I - A)^{-1}");
  }
  SolutionBundle out;
  out.v = solve_transformed(p);
  const auto lu = p.A.entries().fullPivLu();
  std::vector<Eigen::MatrixXcd> u, Au;
  for (const auto& v : out.v.values) {
    u.emplace_back(lu.solve(v));
    Au.emplace_back(p.A.entries() * u.back());
  }
  out.u = Trajectory(p.grid, u, p.interpolation_order);
  const Trajectory w(p.grid, std::move(Au), p.interpolation_order);
  const StartingTerms start =
      p.starting_terms ? solution_starting_terms(p.gamma, p.order_ceil()) : StartingTerms{};
  const Trajectory D = caputo_derivative(w, FracOrder(p.gamma), start);
  std::vector<Eigen::MatrixXcd> res;
  for (std::size_t n = 0; n < p.grid.size(); ++n) {
    Eigen::MatrixXcd r(1, 1);
    if (n == 0) {
      r(0, 0) = NAN;
    } else {
      const double d = (D.values[n] - p.B * w.values[n] - p.a * u[n]).norm();
      r(0, 0) = d;
      out.max_residual = std::max(out.max_residual, d);
    }
    res.push_back(r);
  }
  out.residual = Trajectory(p.grid, std::move(res), 1);
  if (out.max_residual > p.residual_tolerance)
    out.warning = "residual exceeds tolerance; refine the time grid";
  return out;
}

GeneratorMatrix shifted_negative_laplacian(int n, double lambda) {
  const double h = 1.0 / (n + 1);
  return GeneratorMatrix(-laplacian_1d(n, h, lambda).entries());
}

}  // namespace invrof
