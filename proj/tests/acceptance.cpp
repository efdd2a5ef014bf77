// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "invrof/cauchy.hpp"
#include "invrof/diagnostics.hpp"
#include "invrof/error.hpp"
#include "invrof/fraccalc.hpp"
#include "invrof/inverse.hpp"
#include "invrof/rof.hpp"

using namespace invrof;
using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;

namespace tol {
constexpr double bessel_identity_abs = 1e-8;
constexpr double wright_identity_rel = 1e-7;
constexpr double bessel_transform_abs = 1e-6;
constexpr double bessel_transform_error_factor = 10.0;
constexpr double wright_transform_rel = 1e-5;
constexpr double analytic_transform_rel = 1e-5;
constexpr double analytic_stencil = 1e-4;
constexpr double decay_slope = 0.05;
constexpr double decay_slope_loose = 0.1;
constexpr double limit_small = 1e-3;
constexpr double limit_large = 1e-2;
constexpr double resolvent_defect = 1e-5;
constexpr double deintegration_rel = 1e-3;
constexpr double cauchy_residual = 1e-5;
constexpr double cauchy_refinement_ratio = 2.0;
constexpr double sectorial_bound = 10.0;
}  // namespace tol

namespace budget {
constexpr double scalar_identities = 10.0;
constexpr double wright_decay = 5.0;
constexpr double bessel_transform = 120.0;
constexpr double wright_transform = 60.0;
constexpr double decay_fit = 30.0;
constexpr double cauchy = 60.0;
}  // namespace budget

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  double worst = 0.0;  // largest measured quantity relative to its threshold
  std::string note;

  void record(double value, double threshold, const std::string& where) {
    const double ratio = value / threshold;
    if (!(ratio <= 1.0)) {
      if (passed) note = where;
      passed = false;
    }
    if (!(ratio <= worst)) worst = std::isnan(ratio) ? INFINITY : std::max(worst, ratio);
  }
  void fail(const std::string& where) {
    if (passed) note = where;
    passed = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body,
            double time_budget = INFINITY) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.passed = false;
    o.note = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > time_budget) {
    o.passed = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.1fs exceeds %.0fs", seconds, time_budget);
    o.note = o.note.empty() ? buf : o.note + "; " + buf;
  }
  if (!o.passed) ++failures;
  std::printf("%s criterion %d: %s [worst/threshold %.3g, %.1fs]%s%s\n", o.passed ? "PASS" : "FAIL",
              id, title.c_str(), o.worst, seconds, o.note.empty() ? "" : " -- ",
              o.note.c_str());
  std::fflush(stdout);
}

std::string label(const std::string& gen, double a, double b, double c = NAN, double t = NAN) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s (%g,%g,%g) t=%g", gen.c_str(), a, b, c, t);
  return buf;
}

bool tempered(const GeneratorMatrix& A, ROFParams p) {
  return !probe_tempered(ROFFamily(A, p)).unbounded_growth;
}

Vec ones(const GeneratorMatrix& A) { return Vec::Ones(A.dim()); }

Vec inverse_oracle(const GeneratorMatrix& A, ROFParams target, double t, const Vec& x) {
  return rof_apply(ROFFamily(A.inverse(), target), t, x);
}

Outcome scalar_identities() {
  Outcome o;
  for (const auto& r : verify_scalar_laplace_identities(ScalarLaplaceGrid::standard())) {
    if (!r.failure.empty()) o.fail(r.identity + " " + r.label + ": " + r.failure);
    if (r.identity == "bessel")
      o.record(r.abs_err, tol::bessel_identity_abs, "bessel " + r.label);
    else
      o.record(r.rel_err, tol::wright_identity_rel, "wright " + r.label);
  }
  return o;
}

Outcome wright_decay() {
  Outcome o;
  o.worst = -INFINITY;  // reports the largest exponent
  for (double rho : {0.25, 0.5, 0.75}) {
    const double e = wright_decay_exponent(rho, 1.0, 5.0, 50.0, 200);
    if (!(e < 0.0)) o.fail("rho=" + std::to_string(rho));
    o.worst = std::max(o.worst, e);
  }
  return o;
}

Outcome bessel_transform() {
  Outcome o;
  struct Case {
    double alpha, beta, gamma;
  };
  for (const auto& g : default_corpus())
    for (Case c : {Case{1, 0, 1}, Case{0.5, 0, 1}, Case{1.5, 0.5, 1.5}, Case{2, 0, 1}, Case{2, 1, 2}}) {
      const ROFFamily fam(g.matrix, ROFParams(c.alpha, c.beta));
      const Vec x = ones(g.matrix);
      if (!tempered(g.matrix, fam.params())) {
        // The transform's hypothesis fails; it must refuse rather than return a value.
        try {
          bessel_inverse_rof(fam, c.gamma, x, 1.0);
          o.fail(label(g.name, c.alpha, c.beta, c.gamma) + " accepted a non-tempered family");
        } catch (const HypothesisViolation&) {
        }
        continue;
      }
      for (double t : {0.1, 1.0, 5.0, 10.0}) {
        const auto r = bessel_inverse_rof(fam, c.gamma, x, t);
        const double err = (r.value - inverse_oracle(g.matrix, ROFParams(c.alpha, c.gamma), t, x)).norm();
        o.record(err,
                 std::max(tol::bessel_transform_abs, tol::bessel_transform_error_factor * r.error),
                 label(g.name, c.alpha, c.beta, c.gamma, t));
      }
    }
  return o;
}

Outcome wright_transform() {
  Outcome o;
  for (const auto& g : default_corpus())
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      const ROFFamily fam(g.matrix, ROFParams(alpha, 0));
      if (!tempered(g.matrix, fam.params())) continue;
      const Vec x = ones(g.matrix);
      for (double gamma : {alpha / 4, alpha / 2, 3 * alpha / 4})
        for (double t : {0.5, 2.0}) {
          const auto r = wright_inverse_rof(fam, gamma, x, t);
          const Vec want = inverse_oracle(g.matrix, ROFParams(gamma, 0), t, x);
          o.record((r.value - want).norm() / want.norm(), tol::wright_transform_rel,
                   label(g.name, alpha, 0, gamma, t));
        }
    }
  return o;
}

Outcome analytic_transform() {
  Outcome o;
  const char* gens[] = {"diag:-1", "diag:-3", "diag:-1,-2"};
  for (const char* name : gens) {
    const auto A = parse_generator(name);
    const Vec x = ones(A);
    for (double alpha : {0.5, 1.0}) {
      const ROFFamily fam(A, ROFParams(alpha, 0));
      for (double t : {0.5, 1.0, 4.0}) {
        const auto r = analytic_inverse_rof(fam, x, t);
        const Vec want = inverse_oracle(A, ROFParams(alpha, 0), t, x);
        o.record((r.value - want).norm() / want.norm(), tol::analytic_transform_rel,
                 label(name, alpha, 0, 0, t));
        // The (alpha, 0) family is the derivative of the (alpha, 1) family.
        const double h = 1e-3;
        const Vec slope = (bessel_inverse_rof(fam, 1.0, x, t + h).value -
                           bessel_inverse_rof(fam, 1.0, x, t - h).value) /
                          (2 * h);
        o.record((r.value - slope).norm() / std::max(1.0, r.value.norm()), tol::analytic_stencil,
                 label(name, alpha, 0, 1, t) + " stencil");
      }
    }
  }
  return o;
}

Outcome decay_rates() {
  Outcome o;
  const auto A = parse_generator("diag:-1");
  struct Case {
    double alpha, beta, slope, within;
  };
  const Case cases[] = {
      {0.5, 0, -0.5, tol::decay_slope},          {1, 1, 0.0, tol::decay_slope},
      {1.5, 0, -1.5, tol::decay_slope},          {1.5, 0.5, -2.5, tol::decay_slope_loose},
      {2, 1.5, 1.5 - 2.0, tol::decay_slope_loose},
  };
  for (const auto& c : cases) {
    const auto r = fit_decay(ROFFamily(A, ROFParams(c.alpha, c.beta)), 1e2, 1e4);
    char where[128];
    std::snprintf(where, sizeof where, "(%g,%g) fitted %.4f, expected %.4f", c.alpha, c.beta,
                  r.fitted_slope, c.slope);
    o.record(std::abs(r.fitted_slope - c.slope), c.within, where);
  }
  return o;
}

Outcome limit_laws() {
  Outcome o;
  const double small[] = {1e-3};
  const double large[] = {125.0, 250.0, 500.0, 1000.0};
  for (const auto& g : default_corpus())
    for (ROFParams p : {ROFParams(1.5, 0), ROFParams(1.5, 0.5), ROFParams(2, 1)}) {
      const auto r = check_limits(ROFFamily(g.matrix, p), ones(g.matrix), small, large);
      const std::string where = label(g.name, p.alpha, p.beta);
      o.record(r.small_deviation[0], tol::limit_small, where + " small t");
      o.record(r.large_ratio.back(), tol::limit_large, where + " large t");
      for (std::size_t i = 1; i < r.large_ratio.size(); ++i)
        if (!(r.large_ratio[i] < r.large_ratio[i - 1])) o.fail(where + " ratio not decreasing");
    }
  return o;
}

Outcome resolvent_equation() {
  Outcome o;
  const double times[] = {0.5, 1.0, 1.5, 2.0};
  for (const auto& g : default_corpus())
    for (ROFParams p : {ROFParams(0.5, 0), ROFParams(1.5, 0.5), ROFParams(2, 1)}) {
      const auto d = resolvent_equation_defect(ROFFamily(g.matrix, p), ones(g.matrix), times, 2000);
      for (std::size_t i = 0; i < d.size(); ++i)
        o.record(d[i], tol::resolvent_defect, label(g.name, p.alpha, p.beta, NAN, times[i]));
    }
  return o;
}

Outcome deintegration() {
  Outcome o;
  const auto A = parse_generator("diag:-1,-4");
  const Vec x = ones(A);
  const auto grid = uniform_grid(2.0, 400);
  for (double alpha : {0.5, 1.0, 1.5})
    for (auto [beta, delta] : {std::pair{1.0, 0.0}, std::pair{1.5, 0.5}, std::pair{2.0, 0.5}}) {
      const ROFFamily fam(A, ROFParams(alpha, beta));
      const Trajectory r = deintegrate(fam, grid, delta, x);
      const ROFFamily direct = fam.with_params(ROFParams(alpha, delta));
      for (std::size_t n = 5; n + 5 < grid.size(); ++n) {
        const Vec want = rof_apply(direct, grid[n], x);
        o.record((r.values[n] - want).norm() / want.norm(), tol::deintegration_rel,
                 label("diag:-1,-4", alpha, beta, delta, grid[n]));
      }
    }
  return o;
}

Outcome cauchy_solver() {
  Outcome o;
  const int n = 32;
  const auto A = shifted_negative_laplacian(n, 1.0);
  const Eigen::MatrixXcd B = -Eigen::MatrixXcd::Identity(n, n);
  Vec u0(n), u1(n);
  for (int i = 0; i < n; ++i) {
    const double s = (i + 1.0) / (n + 1);
    u0(i) = std::sin(pi * s);
    u1(i) = s * (1 - s);
  }
  for (double gamma : {0.5, 1.0, 1.5}) {
    std::vector<Vec> data{u0};
    if (gamma > 1.0) data.push_back(u1);
    double coarse = 0.0;
    for (std::size_t intervals : {500, 1000}) {
      const auto p = FCProblem::from_initial_u(A, B, 1.0, gamma, data, uniform_grid(5.0, intervals));
      const double res = solve_unsolved_in_derivative(p).max_residual;
      if (intervals == 500) {
        coarse = res;
        continue;
      }
      char where[96];
      std::snprintf(where, sizeof where, "gamma=%g residual %.3g (coarse %.3g)", gamma, res, coarse);
      o.record(res, tol::cauchy_residual, where);
      o.record(tol::cauchy_refinement_ratio * res, coarse, std::string(where) + " refinement");
    }
  }
  return o;
}

Outcome sectoriality() {
  Outcome o;
  for (const auto& g : default_corpus())
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      if (!tempered(g.matrix, ROFParams(alpha, 0))) continue;
      const auto r = check_sectorial(g.matrix, pi - alpha * pi / 2);
      o.record(r.sup, tol::sectorial_bound, label(g.name, alpha, 0));
    }
  return o;
}

}  // namespace

int main() {
  report(1, "scalar Laplace identities of the Bessel and Wright kernels", scalar_identities,
         budget::scalar_identities);
  report(2, "Wright function decay exponent is negative", wright_decay, budget::wright_decay);
  report(3, "Bessel transform equals the family of the inverted generator", bessel_transform,
         budget::bessel_transform);
  report(4, "Wright subordination equals the family of the inverted generator", wright_transform,
         budget::wright_transform);
  report(5, "analytic representation and its stencil consistency", analytic_transform);
  report(6, "large-time decay slopes", decay_rates, budget::decay_fit);
  report(7, "small- and large-time limit laws", limit_laws);
  report(8, "resolvent equation defect", resolvent_equation);
  report(9, "de-integration round trip", deintegration);
  report(10, "Cauchy problem residual and refinement", cauchy_solver, budget::cauchy);
  report(11, "sampled sectoriality bound", sectoriality);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
