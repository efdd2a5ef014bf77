#include <doctest.h>

#include <cmath>

#include "invrof/cauchy.hpp"
#include "invrof/diagnostics.hpp"
#include "invrof/error.hpp"
#include "invrof/specfun.hpp"

using namespace invrof;
using cplx = std::complex<double>;

namespace {

constexpr int n_points = 32;

struct ExampleData {
  GeneratorMatrix A = shifted_negative_laplacian(n_points, 1.0);
  Eigen::MatrixXcd B = -Eigen::MatrixXcd::Identity(n_points, n_points);
  Eigen::VectorXcd u0 = Eigen::VectorXcd(n_points);
  Eigen::VectorXcd u1 = Eigen::VectorXcd(n_points);

  ExampleData() {
    for (int i = 0; i < n_points; ++i) {
      const double x = (i + 1.0) / (n_points + 1);
      u0(i) = std::sin(M_PI * x);
      u1(i) = x * (1 - x);
    }
  }

  FCProblem problem(double gamma, std::size_t intervals) const {
    std::vector<Eigen::VectorXcd> u{u0};
    if (gamma > 1.0) u.push_back(u1);
    return FCProblem::from_initial_u(A, B, 1.0, gamma, u, uniform_grid(5.0, intervals));
  }
};

GeneratorMatrix scalar_generator(double a) {
  return GeneratorMatrix(Eigen::MatrixXcd::Constant(1, 1, a));
}

}  // namespace

TEST_CASE("Transformed problem: M = -1 gives the exponential") {
  const FCProblem p(scalar_generator(-1.0), Eigen::MatrixXcd::Zero(1, 1), 1.0, 1.0,
                    {Eigen::VectorXcd::Ones(1)}, uniform_grid(3.0, 30));
  const Trajectory v = solve_transformed(p);
  for (std::size_t n = 0; n < p.grid.size(); ++n)
    CHECK(std::abs(v.values[n](0, 0) - std::exp(-p.grid[n])) <= 1e-13);
}

TEST_CASE("Transformed problem: B = -I, a = 0 gives E_{0.5,1}(-t^0.5) x") {
  const Eigen::VectorXcd x = (Eigen::VectorXcd(2) << 1.0, -2.0).finished();
  const FCProblem p(parse_generator("diag:-1,-3"), -Eigen::MatrixXcd::Identity(2, 2), 0.0, 0.5, {x},
                    uniform_grid(4.0, 20));
  const Trajectory v = solve_transformed(p);
  for (std::size_t n = 0; n < p.grid.size(); ++n) {
    const cplx e = mittag_leffler(MLParams(0.5, 1.0), -std::sqrt(p.grid[n]));
    CHECK((v.values[n] - e * x).norm() <= 1e-12);
  }
}

TEST_CASE("Transformed problem: M = 2 A^{-1} with a zero velocity") {
  const Eigen::VectorXcd v0 = Eigen::VectorXcd::Ones(2);
  const FCProblem p(parse_generator("diag:-1,-2"), Eigen::MatrixXcd::Zero(2, 2), 2.0, 1.5,
                    {v0, Eigen::VectorXcd::Zero(2)}, uniform_grid(3.0, 12));
  const Trajectory v = solve_transformed(p);
  for (std::size_t n = 0; n < p.grid.size(); ++n) {
    const double s = std::pow(p.grid[n], 1.5);
    CHECK(std::abs(v.values[n](0, 0) - mittag_leffler(MLParams(1.5, 1), -2.0 * s)) <= 1e-12);
    CHECK(std::abs(v.values[n](1, 0) - mittag_leffler(MLParams(1.5, 1), -1.0 * s)) <= 1e-12);
  }
}

TEST_CASE("Degenerate problem: B = 0, a = 1, A = -I") {
  const FCProblem p(parse_generator("diag:-1,-1"), Eigen::MatrixXcd::Zero(2, 2), 1.0, 1.0,
                    {Eigen::VectorXcd::Ones(2)}, uniform_grid(2.0, 1000));
  const auto s = solve_unsolved_in_derivative(p);
  for (std::size_t n = 0; n < p.grid.size(); ++n)
    CHECK((s.u.values[n] + std::exp(-p.grid[n]) * Eigen::VectorXcd::Ones(2)).norm() <= 1e-13);
  CHECK(s.max_residual <= 1e-8);
  CHECK(s.warning.empty());
  CHECK(std::isnan(s.residual.values[0](0, 0).real()));
}

TEST_CASE("Diffusion-type example, first order in time") {
  const ExampleData d;
  const auto p = d.problem(1.0, 1000);
  const auto s = solve_unsolved_in_derivative(p);
  CHECK(s.max_residual <= 1e-5);
  for (std::size_t n = 0; n < p.grid.size(); n += 97)
    CHECK((p.A.entries() * s.u.values[n] - s.v.values[n]).norm() <= 1e-10 * s.v.values[n].norm());
  CHECK((initial_derivative(s.v, 0) - p.initial_Au[0]).norm() <= 1e-12);
}

TEST_CASE("Wave-type example, second order in time") {
  const ExampleData d;
  const auto p = d.problem(2.0, 1000);
  const auto s = solve_unsolved_in_derivative(p);
  CHECK(s.max_residual <= 1e-5);
  CHECK((initial_derivative(s.v, 1) - p.initial_Au[1]).norm() <= 1e-6 * p.initial_Au[1].norm());
}

TEST_CASE("Residual decreases under grid refinement") {
  const ExampleData d;
  double previous = INFINITY;
  for (std::size_t intervals : {250, 500, 1000}) {
    const auto s = solve_unsolved_in_derivative(d.problem(1.5, intervals));
    CAPTURE(intervals);
    CHECK(s.max_residual < previous);
    previous = s.max_residual;
  }
}

TEST_CASE("Coarse grids raise the refinement warning") {
  const ExampleData d;
  auto p = d.problem(1.5, 40);
  const auto s = solve_unsolved_in_derivative(p);
  CHECK(s.max_residual > p.residual_tolerance);
  CHECK(s.warning.find("refine") != std::string::npos);
}

TEST_CASE("The transformed generator is sectorial at the matching angle") {
  const ExampleData d;
  const auto p = d.problem(1.0, 10);
  const GeneratorMatrix M(p.transformed_generator());
  for (double gamma : {0.5, 1.0, 1.5}) {
    CAPTURE(gamma);
    CHECK(check_sectorial(M, M_PI - gamma * M_PI / 2).sup <= 10.0);
  }
}

TEST_CASE("Starting exponents of the solution") {
  const auto s = solution_starting_terms(1.5, 2);
  CHECK(s.exponents.front() == 0.0);
  CHECK(std::is_sorted(s.exponents.begin(), s.exponents.end()));
  CHECK(s.exponents.back() < 6.0);
  CHECK(std::find(s.exponents.begin(), s.exponents.end(), 2.5) != s.exponents.end());
}

TEST_CASE("Validation and the commutation hypothesis") {
  const auto grid = uniform_grid(1.0, 10);
  const Eigen::VectorXcd x = Eigen::VectorXcd::Ones(2);
  const auto A = parse_generator("diag:-1,-2");
  const Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(FCProblem(A, Z, 1.0, 2.5, {x, x, x}, grid), DomainError);
  CHECK_THROWS_AS(FCProblem(A, Z, 1.0, 1.5, {x}, grid), DomainError);
  CHECK_THROWS_AS(FCProblem(A, Z, -1.0, 1.0, {x}, grid), DomainError);
  CHECK_THROWS_AS(FCProblem(GeneratorMatrix(Z), Z, 1.0, 1.0, {x}, grid), HypothesisViolation);
  CHECK_THROWS_AS(FCProblem(A, Z, 1.0, 1.0, {x}, std::vector<double>{0.5, 1.0}), DomainError);

  Eigen::MatrixXcd B(2, 2);
  B << 0, 1, 0, 0;
  const FCProblem p(A, B, 1.0, 1.0, {x}, grid);
  CHECK_THROWS_AS(solve_unsolved_in_derivative(p), CommutationViolation);
  const FCProblem q(A, B, 1.0, 0.5, {x}, grid);
  CHECK_NOTHROW(solve_unsolved_in_derivative(q));
}
