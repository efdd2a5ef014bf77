#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invrof/generator.hpp"
#include "invrof/inverse.hpp"
#include "invrof/rof.hpp"

namespace invrof {

// Laplace pair of the Bessel kernel:
//   int_0^inf e^{-lambda s} J_{1+beta}(2 sqrt(st)) s^{(1+beta)/2} ds
//     = t^{(1+beta)/2} lambda^{-2-beta} e^{-t/lambda}.
struct BesselLaplaceCase {
  double beta, lambda, t;
};

// Laplace pair of the Wright kernel:
//   int_0^inf e^{-lambda s} s^{nu rho} phi(rho, 1 + nu rho; -t s^rho) ds
//     = lambda^{-1-nu rho} exp(-t lambda^{-rho}).
struct WrightLaplaceCase {
  double rho, nu, lambda, t;
};

struct ScalarLaplaceGrid {
  std::vector<BesselLaplaceCase> bessel;
  std::vector<WrightLaplaceCase> wright;

  // beta in {0, 0.5, 1} x lambda in {1, 2} x t in {1, 2};
  // (rho, nu) in {(0.5,1), (1,0), (0.75,2)} x lambda in {1, 2} x t in {0, 1}.
  static ScalarLaplaceGrid standard();
};

struct ScalarIdentityReport {
  std::string identity;  // "bessel" or "wright"
  std::string label;     // parameter tuple
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::string failure;  // quadrature failure message, empty on success
};

std::vector<ScalarIdentityReport> verify_scalar_laplace_identities(const ScalarLaplaceGrid& grid);

// max over r of log|phi(rho, mu; -r)| / r^{1/(1+rho)} on log-spaced samples.
double wright_decay_exponent(double rho, double mu, double r_lo = 5.0, double r_hi = 50.0,
                             int samples = 200);

struct LaplaceCheckReport {
  std::complex<double> lambda;
  Eigen::VectorXcd lhs;
  Eigen::VectorXcd rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tail_estimate = 0.0;
  double t_max = 0.0;
};

// Compares int_0^T e^{-lambda t} f(t) dt against rhs. The tail beyond T is
// bounded by bound * int_T^inf e^{-Re lambda t} t^growth dt; with t_max = 0
// the truncation is chosen so this stays below tol / 2. Throws
// TailToleranceUnreachable when a supplied t_max leaves a larger tail.
LaplaceCheckReport laplace_check(const std::function<Eigen::VectorXcd(double)>& f,
                                 const Eigen::VectorXcd& rhs, std::complex<double> lambda,
                                 double bound, double growth, double tol, double t_max = 0.0);

// Laplace transform of t -> R(t) x against lambda^(alpha-beta-1)(lambda^alpha - A)^{-1} x.
std::vector<LaplaceCheckReport> verify_family_laplace(const ROFFamily& fam,
                                                      const Eigen::VectorXcd& x,
                                                      std::span<const std::complex<double>> lambdas,
                                                      double tol = 1e-8, double t_max = 0.0);

// Laplace transform of an inverse-transform trajectory against the resolvent
// formula of A^{-1} with the target orders.
std::vector<LaplaceCheckReport> verify_inverse_laplace(
    const ROFFamily& fam, const InverseTransformSpec& spec, const Eigen::VectorXcd& x,
    std::span<const std::complex<double>> lambdas, double tol = 1e-6, const QuadratureSpec& q = {});

struct SectorialReport {
  double sup = 0.0;
  std::complex<double> argmax;
  std::size_t probes = 0;
  std::vector<std::string> notes;  // skipped near-spectrum probes
};

// Probe set outside the closed sector |arg z| <= angle: 40 log-spaced radii
// in [1e-3, 1e3] times 8 arguments strictly between angle and pi, on both
// half planes.
std::vector<std::complex<double>> sector_probes(double angle);

// sup over the probes of ||z (z + A)^{-1}||, the sectoriality constant of -A.
SectorialReport check_sectorial(const GeneratorMatrix& A, double angle);
SectorialReport check_sectorial(const GeneratorMatrix& A,
                                std::span<const std::complex<double>> probes);

struct DecayFitReport {
  double fitted_slope = 0.0;
  double expected_slope = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;  // root mean square of the log-log fit residuals
  bool envelope = false;  // fitted to local maxima of an oscillating norm
};

// Slope predicted for ||R(t)|| at large t: beta - alpha, or -alpha - 1 when
// beta + 1 = alpha in (1, 2); for alpha = 2 the bound 1 + t^(beta-2) gives
// max(0, beta - 2).
double expected_decay_slope(const ROFParams& params);

// Least-squares slope of log ||R(t)|| against log t on [t_lo, t_hi]
// (t_lo >= 10, at least two decades). For alpha = 2 the local maxima over
// one period of each sampling window are fitted instead.
DecayFitReport fit_decay(const ROFFamily& fam, double t_lo, double t_hi, int samples = 60);

struct LimitReport {
  // ||R(t) x / t^beta - x / Gamma(beta+1)|| at each small time.
  std::vector<double> small_t, small_deviation;
  // ||(I^alpha R x)(t)|| / t^(alpha+beta) at each large time.
  std::vector<double> large_t, large_ratio;
};

LimitReport check_limits(const ROFFamily& fam, const Eigen::VectorXcd& x,
                         std::span<const double> small_t, std::span<const double> large_t);

// Defect ||R(t)x - t^beta x/Gamma(beta+1) - (I^alpha R(.)Ax)(t)|| at the
// requested times, with the fractional integral taken by product integration
// on a uniform grid of `intervals` steps over [0, max time].
std::vector<double> resolvent_equation_defect(const ROFFamily& fam, const Eigen::VectorXcd& x,
                                              std::span<const double> times,
                                              std::size_t intervals = 2000);

struct NamedGenerator {
  std::string name;
  GeneratorMatrix matrix;
};

// -1, -2, diag(-1,-4), the 2x2 Jordan block at -2 and the 4-point
// Dirichlet Laplacian shifted by -1.
std::vector<NamedGenerator> default_corpus();

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // pass when value < threshold
  bool passed = false;
  std::string detail;      // failure message or extra context
};

// Suites of the default verification corpus: "scalar", "wright", "laplace",
// "sectorial", "decay", "limits", "resolvent", or "all".
std::vector<std::string> verification_suites();
std::vector<CheckResult> run_verification_suite(const std::string& suite, unsigned workers);

// Worker count for concurrent checks: INVROF_WORKERS if set, otherwise the
// hardware concurrency.
unsigned default_workers();

// Runs jobs[i]() for all i on up to `workers` threads.
void run_concurrently(std::span<const std::function<void()>> jobs, unsigned workers);

}  // namespace invrof
