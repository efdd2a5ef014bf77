#include <doctest.h>

#include <cmath>

#include "invrof/diagnostics.hpp"
#include "invrof/error.hpp"
#include "invrof/fraccalc.hpp"
#include "invrof/generator.hpp"
#include "invrof/inverse.hpp"
#include "invrof/rof.hpp"

using namespace invrof;
using cplx = std::complex<double>;

namespace {

const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);

Eigen::VectorXcd oracle(const GeneratorMatrix& A, ROFParams target, double t,
                        const Eigen::VectorXcd& x) {
  return rof_apply(ROFFamily(A.inverse(), target), t, x);
}

}  // namespace

TEST_CASE("Bessel transform of the exponential family of -1 gives 1 - e^{-t}") {
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(1, 0));
  const auto r = bessel_inverse_rof(fam, 1.0, one, 2.0);
  CHECK(std::abs(r.value(0) - (1.0 - std::exp(-2.0))) <= 1e-10);
  CHECK(r.error <= 1e-8);
}

TEST_CASE("Bessel transform matches the explicitly inverted generator") {
  const auto A = parse_generator("diag:-1,-4");
  const Eigen::VectorXcd x = Eigen::VectorXcd::Ones(2);
  struct Case {
    double alpha, beta, gamma;
  };
  for (const Case c : {Case{1, 0, 1}, Case{0.5, 0, 1}, Case{1.5, 0.5, 1.5}})
    for (double t : {0.1, 1.0, 5.0}) {
      CAPTURE(c.alpha);
      CAPTURE(t);
      const auto r = bessel_inverse_rof(ROFFamily(A, ROFParams(c.alpha, c.beta)), c.gamma, x, t);
      const double err = (r.value - oracle(A, ROFParams(c.alpha, c.gamma), t, x)).norm();
      CHECK(err <= std::max(1e-6, 10 * r.error));
    }
}

TEST_CASE("Wright transform matches the explicitly inverted generator") {
  const auto A = parse_generator("diag:-2");
  const double alpha = 1.5;
  for (double gamma : {alpha / 4, alpha / 2})
    for (double t : {0.5, 2.0}) {
      CAPTURE(gamma);
      CAPTURE(t);
      const auto r = wright_inverse_rof(ROFFamily(A, ROFParams(alpha, 0)), gamma, one, t);
      const Eigen::VectorXcd want = oracle(A, ROFParams(gamma, 0), t, one);
      CHECK((r.value - want).norm() <= 1e-5 * want.norm());
    }
}

TEST_CASE("Analytic representation matches the explicitly inverted generator") {
  const auto A = parse_generator("diag:-1,-2");
  const Eigen::VectorXcd x = Eigen::VectorXcd::Ones(2);
  for (double alpha : {0.5, 1.0})
    for (double t : {0.5, 4.0}) {
      const auto r = analytic_inverse_rof(ROFFamily(A, ROFParams(alpha, 0)), x, t);
      const Eigen::VectorXcd want = oracle(A, ROFParams(alpha, 0), t, x);
      CHECK((r.value - want).norm() <= 1e-5 * want.norm());
    }
}

TEST_CASE("Self-inverse generator: the transform integrates the input family") {
  // A = -1 equals its inverse, so the Bessel output is I^(gamma - beta) of the input.
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(1.5, 0.5));
  const double gamma = 1.5;
  const auto grid = uniform_grid(2.0, 400);
  const auto integrated = frac_integral(sample_family(fam, grid, one), FracOrder(gamma - 0.5),
                                        family_starting_terms(fam.params()));
  for (std::size_t n : {40, 200, 400}) {
    const auto r = bessel_inverse_rof(fam, gamma, one, grid[n]);
    CAPTURE(grid[n]);
    CHECK(std::abs(r.value(0) - integrated.values[n](0, 0)) <= 1e-7);
  }
}

TEST_CASE("Output is tempered: ||output(t)|| / t^gamma stays bounded") {
  const auto A = parse_generator("diag:-1,-4");
  const Eigen::VectorXcd x = Eigen::VectorXcd::Ones(2);
  const ROFFamily fam(A, ROFParams(1, 0));
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double t = 0.01 * std::pow(1e4, i / 8.0);
    worst = std::max(worst, bessel_inverse_rof(fam, 1.0, x, t).value.norm() / t);
  }
  // Each component is (1 - e^{-ct})/(ct) <= 1 after scaling by 1/c <= 1.
  CHECK(worst <= x.norm() * (1 + 1e-6));
}

TEST_CASE("Laplace transform of inverse trajectories") {
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(1, 0));
  const cplx lambdas[] = {0.5, 1.0, 2.0};
  for (const auto& spec : {InverseTransformSpec(ROFParams(1, 0), 1.0, TransformKind::bessel_integrated),
                           InverseTransformSpec(ROFParams(1, 0), 0.0, TransformKind::analytic_derivative)}) {
    for (const auto& r : verify_inverse_laplace(fam, spec, one, lambdas)) {
      CAPTURE(r.lambda);
      CHECK(r.rel_err <= 1e-6);
    }
  }
}

TEST_CASE("Trajectory helper reports per-point errors") {
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(1, 0));
  const InverseTransformSpec spec(ROFParams(1, 0), 1.0, TransformKind::bessel_integrated);
  const auto grid = uniform_grid(3.0, 6);
  const auto r = inverse_rof_trajectory(fam, spec, one, grid);
  REQUIRE(r.trajectory.size() == grid.size());
  REQUIRE(r.errors.size() == grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n)
    CHECK(std::abs(r.trajectory.values[n](0, 0) - (1 - std::exp(-grid[n]))) <= 1e-9);
  CHECK(r.max_error == doctest::Approx(*std::max_element(r.errors.begin(), r.errors.end())));
}

TEST_CASE("Hypotheses and guards") {
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(1, 0));
  CHECK_THROWS_AS(bessel_inverse_rof(fam, 0.52, one, 1.0), HypothesisViolation);
  CHECK_THROWS_AS(InverseTransformSpec(ROFParams(1, 0), 1.5, TransformKind::wright_subordinated),
                  HypothesisViolation);
  CHECK_THROWS_AS(InverseTransformSpec(ROFParams(1, 0.5), 0.0, TransformKind::analytic_derivative),
                  HypothesisViolation);
  const ROFFamily jordan(parse_generator("jordan:-2:2"), ROFParams(2, 0));
  CHECK_THROWS_AS(bessel_inverse_rof(jordan, 1.0, Eigen::VectorXcd::Ones(2), 1.0),
                  HypothesisViolation);
  const ROFFamily singular(GeneratorMatrix(Eigen::MatrixXcd::Zero(1, 1)), ROFParams(1, 0));
  CHECK_THROWS_AS(bessel_inverse_rof(singular, 1.0, one, 1.0), HypothesisViolation);
  QuadratureSpec q;
  q.nodes_per_oscillation = 4;
  CHECK_THROWS_AS(q.validate(), DomainError);
}
