#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>

#include "invrof/diagnostics.hpp"
#include "invrof/error.hpp"

using namespace invrof;
using cplx = std::complex<double>;

namespace {

Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("Scalar Laplace identities on a reduced grid") {
  ScalarLaplaceGrid grid;
  grid.bessel = {{0.5, 1.0, 2.0}, {1.0, 2.0, 1.0}};
  grid.wright = {{0.5, 1.0, 1.0, 1.0}, {0.75, 2.0, 2.0, 0.0}};
  for (const auto& r : verify_scalar_laplace_identities(grid)) {
    CAPTURE(r.label);
    CHECK(r.failure.empty());
    if (r.identity == "bessel")
      CHECK(r.abs_err <= 1e-8);
    else
      CHECK(r.rel_err <= 1e-7);
  }
}

TEST_CASE("Wright decay exponent is negative") {
  CHECK(wright_decay_exponent(0.5, 1.0) < 0.0);
  CHECK_THROWS_AS(wright_decay_exponent(0.5, 1.0, 5.0, 1.0), DomainError);
}

TEST_CASE("Family Laplace transform matches the resolvent") {
  const ROFFamily fam(parse_generator("jordan:-2:2"), ROFParams(1.5, 0.5));
  const cplx lambdas[] = {0.5, {1.0, 1.0}};
  for (const auto& r : verify_family_laplace(fam, Eigen::VectorXcd::Ones(2), lambdas)) {
    CAPTURE(r.lambda);
    CHECK(r.rel_err <= 1e-8);
    CHECK(r.tail_estimate <= 0.5e-8);
  }
}

TEST_CASE("Laplace check refuses a truncation with a large tail") {
  auto f = [](double t) { return Eigen::VectorXcd::Constant(1, std::exp(-t)); };
  const Eigen::VectorXcd rhs = Eigen::VectorXcd::Constant(1, 0.5);
  CHECK_THROWS_AS(laplace_check(f, rhs, 1.0, 1.0, 0.0, 1e-8, 2.0), TailToleranceUnreachable);
  const auto r = laplace_check(f, rhs, 1.0, 1.0, 0.0, 1e-10);
  CHECK(r.abs_err <= 1e-10);
}

TEST_CASE("Sectoriality constant is invariant under unitary similarity") {
  const Eigen::MatrixXcd L = laplacian_1d(4, 1.0, 1.0).entries();
  const Eigen::MatrixXcd J = jordan_generator(-2.0, 4).entries();
  for (const Eigen::MatrixXcd* M : {&L, &J})
    for (unsigned seed : {1u, 2u}) {
      const Eigen::MatrixXcd Q = random_unitary(4, seed);
      const Eigen::MatrixXcd S = Q * *M * Q.adjoint();
      const auto a = check_sectorial(GeneratorMatrix(*M), 0.75 * M_PI);
      const auto b = check_sectorial(GeneratorMatrix(S), 0.75 * M_PI);
      CHECK(a.probes == b.probes);
      CHECK(std::abs(a.sup - b.sup) <= 1e-10 * a.sup);
    }
}

TEST_CASE("Sectorial probes") {
  const auto probes = sector_probes(M_PI / 2);
  CHECK(probes.size() == 40 * 8 * 2);
  for (const auto& z : probes) CHECK(std::abs(std::arg(z)) > M_PI / 2);
  // For A = -1 the bound |z| / |z - 1| tends to 1 at large |z|.
  const auto r = check_sectorial(parse_generator("diag:-1"), M_PI / 2);
  CHECK(r.sup >= 0.99);
  CHECK(r.sup <= 1.5);
}

TEST_CASE("Expected decay slopes") {
  CHECK(expected_decay_slope(ROFParams(0.5, 0)) == doctest::Approx(-0.5));
  CHECK(expected_decay_slope(ROFParams(1.5, 0.5)) == doctest::Approx(-2.5));
  CHECK(expected_decay_slope(ROFParams(2, 1.5)) == doctest::Approx(0.0));
  CHECK(expected_decay_slope(ROFParams(2, 3)) == doctest::Approx(1.0));
}

TEST_CASE("Decay fit error shrinks as the window grows") {
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(0.5, 0));
  double previous = INFINITY;
  for (double t_hi : {1e3, 2e3, 4e3, 8e3}) {
    const auto r = fit_decay(fam, 10.0, t_hi);
    const double err = std::abs(r.fitted_slope - r.expected_slope);
    CAPTURE(t_hi);
    CHECK(err <= previous + r.residual);
    previous = err;
  }
  CHECK_THROWS_AS(fit_decay(fam, 10.0, 20.0), DomainError);
}

TEST_CASE("Limit laws of the exponential family") {
  const ROFFamily fam(parse_generator("diag:-1"), ROFParams(1, 0));
  const double small[] = {1e-3};
  const double large[] = {100.0, 200.0};
  const auto r = check_limits(fam, Eigen::VectorXcd::Ones(1), small, large);
  CHECK(r.small_deviation[0] == doctest::Approx(1 - std::exp(-1e-3)).epsilon(1e-6));
  // (I^1 R)(t) = 1 - e^{-t}, so the ratio is (1 - e^{-t}) / t.
  CHECK(r.large_ratio[0] == doctest::Approx(1e-2).epsilon(1e-6));
  CHECK(r.large_ratio[1] < r.large_ratio[0]);
}

TEST_CASE("Resolvent equation defect is small") {
  const ROFFamily fam(parse_generator("diag:-1,-4"), ROFParams(1.5, 0.5));
  const double times[] = {0.5, 1.0};
  for (double d : resolvent_equation_defect(fam, Eigen::VectorXcd::Ones(2), times, 400))
    CHECK(d <= 1e-5);
}

TEST_CASE("Concurrent runner") {
  std::atomic<int> sum{0};
  std::vector<std::function<void()>> jobs;
  for (int i = 1; i <= 20; ++i) jobs.emplace_back([&sum, i] { sum += i; });
  run_concurrently(jobs, 3);
  CHECK(sum == 210);
  jobs.emplace_back([] { throw PrecisionLoss("boom"); });
  CHECK_THROWS_AS(run_concurrently(jobs, 2), PrecisionLoss);

  setenv("INVROF_WORKERS", "3", 1);
  CHECK(default_workers() == 3);
  unsetenv("INVROF_WORKERS");
  CHECK(default_workers() >= 1);
}

TEST_CASE("Verification suites") {
  const auto names = verification_suites();
  CHECK(std::find(names.begin(), names.end(), "laplace") != names.end());
  for (const auto& r : run_verification_suite("wright", 2)) {
    CAPTURE(r.name);
    CHECK(r.passed);
  }
  CHECK_THROWS_AS(run_verification_suite("nonsense", 1), DomainError);
  const auto corpus = default_corpus();
  CHECK(corpus.size() == 5);
}
