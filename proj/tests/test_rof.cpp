#include <doctest.h>

#include <cmath>

#include "invrof/error.hpp"
#include "invrof/fraccalc.hpp"
#include "invrof/generator.hpp"
#include "invrof/quadrature.hpp"
#include "invrof/rof.hpp"

using namespace invrof;
using cplx = std::complex<double>;

namespace {

GeneratorMatrix scalar_generator(double a) {
  return GeneratorMatrix(Eigen::MatrixXcd::Constant(1, 1, a));
}

double value(const ROFFamily& fam, double t) { return rof_eval(fam, t)(0, 0).real(); }

}  // namespace

TEST_CASE("Scalar families in closed form") {
  const auto A = scalar_generator(-1.0);
  for (double t = 0.0; t <= 12.0; t += 0.37) {
    CAPTURE(t);
    CHECK(value(ROFFamily(A, ROFParams(1, 0)), t) == doctest::Approx(std::exp(-t)).epsilon(1e-13));
    CHECK(std::abs(value(ROFFamily(A, ROFParams(2, 0)), t) - std::cos(t)) <= 1e-12);
    CHECK(std::abs(value(ROFFamily(A, ROFParams(2, 1)), t) - std::sin(t)) <= 1e-12);
    CHECK(std::abs(value(ROFFamily(A, ROFParams(1, 1)), t) - (1 - std::exp(-t))) <= 1e-13);
  }
}

// Reference from mpmath at 40 digits: f(t) = t^0.5 E_{1.5,1.5}(-2 t^1.5) and
// t^2 E'_{1.5,1.5}(-2 t^1.5) at t = 1.3.
TEST_CASE("Jordan block family against high-precision values") {
  const ROFFamily fam(jordan_generator(-2.0, 2), ROFParams(1.5, 0.5));
  const Eigen::MatrixXcd R = rof_eval(fam, 1.3);
  CHECK(std::abs(R(0, 0) - 0.25165801003039633313) <= 1e-12);
  CHECK(std::abs(R(1, 1) - 0.25165801003039633313) <= 1e-12);
  CHECK(std::abs(R(0, 1) - 0.275078045181023338) <= 1e-11);
  CHECK(std::abs(R(1, 0)) <= 1e-14);
}

TEST_CASE("Backends agree") {
  const auto A = laplacian_1d(4, 1.0, 1.0);
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const ROFParams p(alpha, 0.5);
    const ROFFamily fam(A, p);
    for (double t : {0.05, 0.7, 3.0}) {
      CAPTURE(alpha);
      CAPTURE(t);
      const Eigen::MatrixXcd ref = rof_eval(fam, t, Backend::automatic);
      if (std::pow(t, alpha) * A.norm() <= 2.0)
        CHECK((rof_eval(fam, t, Backend::ml_series) - ref).norm() <= 1e-9 * (1 + ref.norm()));
      if (alpha < 2.0)
        CHECK((rof_eval(fam, t, Backend::laplace_inversion) - ref).norm() <= 1e-8 * (1 + ref.norm()));
    }
  }
}

TEST_CASE("Series backend refuses arguments it cannot sum accurately") {
  const ROFFamily fam(laplacian_1d(4, 1.0, 1.0), ROFParams(1.0, 0.5));
  CHECK_THROWS_AS(rof_eval(fam, 3.0, Backend::ml_series), Error);
}

TEST_CASE("Exponential family is a semigroup") {
  const ROFFamily fam(laplacian_1d(4, 1.0, 1.0), ROFParams(1, 0));
  for (double t : {0.3, 1.1})
    for (double s : {0.2, 2.5}) {
      const Eigen::MatrixXcd lhs = rof_eval(fam, t + s);
      const Eigen::MatrixXcd rhs = rof_eval(fam, t) * rof_eval(fam, s);
      CHECK((lhs - rhs).norm() <= 1e-13);
    }
}

TEST_CASE("Sine family functional equation: 2 R(t) R(s) = integral of R over [t-s, t+s]") {
  const ROFFamily fam(scalar_generator(-1.0), ROFParams(2, 1));
  for (double t : {1.0, 1.7, 4.0})
    for (double s : {0.25, 1.0}) {
      CAPTURE(t);
      CAPTURE(s);
      const double lhs = 2 * value(fam, t) * value(fam, s);
      const double rhs =
          quad::integrate([&](double tau) { return value(fam, tau); }, t - s, t + s, 1e-14, 1e-13)
              .value;
      CHECK(std::abs(lhs - rhs) <= 1e-11);
    }
}

TEST_CASE("Integrating the family raises beta by alpha") {
  const auto A = diag_generator(std::vector<cplx>{-1.0, -4.0});
  const Eigen::VectorXcd x = Eigen::VectorXcd::Ones(2);
  const ROFFamily fam(A, ROFParams(0.7, 0.3));
  const auto grid = uniform_grid(2.0, 400);
  const auto sampled = sample_family(fam, grid, x);
  const auto integrated =
      frac_integral(sampled, FracOrder(0.7), family_starting_terms(fam.params()));
  const ROFFamily target = fam.with_params(ROFParams(0.7, 1.0));
  for (std::size_t n = 10; n < grid.size(); n += 39)
    CHECK((integrated.values[n] - rof_apply(target, grid[n], x)).norm() <= 1e-7);
}

TEST_CASE("Deintegration recovers the exponential family") {
  const ROFFamily fam(scalar_generator(-1.0), ROFParams(1, 1));
  const auto grid = uniform_grid(2.0, 400);
  const auto r = deintegrate(fam, grid, 0.0, Eigen::VectorXcd::Ones(1));
  for (std::size_t n = 5; n + 5 < grid.size(); ++n)
    CHECK(std::abs(r.values[n](0, 0) - std::exp(-grid[n])) <= 3.1e-5 * std::exp(-grid[n]));
}

TEST_CASE("Derivative of the family") {
  const ROFFamily fam(scalar_generator(-1.0), ROFParams(2, 1));
  for (double t : {0.3, 2.0, 7.5})
    CHECK(std::abs(rof_derivative_apply(fam, t, Eigen::VectorXcd::Ones(1))(0) - std::cos(t)) <= 1e-12);
}

TEST_CASE("Temperedness probe") {
  CHECK_FALSE(probe_tempered(ROFFamily(scalar_generator(-1.0), ROFParams(2, 0))).unbounded_growth);
  CHECK_FALSE(probe_tempered(ROFFamily(jordan_generator(-2.0, 2), ROFParams(1.5, 0))).unbounded_growth);
  CHECK(probe_tempered(ROFFamily(jordan_generator(-2.0, 2), ROFParams(2, 0))).unbounded_growth);
  CHECK(probe_tempered(ROFFamily(scalar_generator(0.5), ROFParams(1, 0))).unbounded_growth);

  ROFFamily fam(scalar_generator(-1.0), ROFParams(1, 0));
  const auto grid = uniform_grid(10.0, 100);
  const auto fit = fit_tempered_bound(fam, grid);
  // The ratio e^{-t} peaks at the first positive node.
  CHECK(fit.bound == doctest::Approx(std::exp(-0.1)));
  REQUIRE(fam.tempered_bound().has_value());
  CHECK(*fam.tempered_bound() == doctest::Approx(std::exp(-0.1)));
}

TEST_CASE("Starting exponents of the family") {
  const auto s = family_starting_terms(ROFParams(0.5, 0.25), 4);
  REQUIRE(s.exponents.size() == 4);
  CHECK(s.exponents[0] == doctest::Approx(0.25));
  CHECK(s.exponents[3] == doctest::Approx(1.75));
}

TEST_CASE("Parameter and generator validation") {
  CHECK_THROWS_AS(ROFParams(2.5, 0), DomainError);
  CHECK_THROWS_AS(ROFParams(1, -0.1), DomainError);
  CHECK_THROWS_AS(parse_generator("jordan:-2:0"), DomainError);
  CHECK_THROWS_AS(GeneratorMatrix(Eigen::MatrixXcd::Zero(2, 2)).inverse(), HypothesisViolation);
  const auto L = parse_generator("laplacian_1d:4:1:1");
  CHECK(L.dim() == 4);
  CHECK(std::abs(L.entries()(0, 0) - (-3.0)) <= 1e-15);
}
