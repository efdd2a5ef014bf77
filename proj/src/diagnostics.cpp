#include "invrof/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "invrof/error.hpp"
#include "invrof/matfun.hpp"
#include "invrof/quadrature.hpp"
#include "invrof/specfun.hpp"

namespace invrof {

namespace {

using Vec = Eigen::VectorXcd;
constexpr double pi = std::numbers::pi;

std::string tuple_label(std::initializer_list<std::pair<const char*, double>> items) {
  std::string out;
  char buf[64];
  for (const auto& [name, value] : items) {
    std::snprintf(buf, sizeof buf, "%s%s=%g", out.empty() ? "" : ",", name, value);
    out += buf;
  }
  return out;
}

void finish(ScalarIdentityReport& r) {
  r.abs_err = std::abs(r.lhs - r.rhs);
  r.rel_err = r.abs_err / std::max(std::abs(r.rhs), 1e-300);
}

// Truncation point where e^{-lambda s} times a power of s is far below
// rounding relative to the transform.
double exp_cutoff(double lambda) { return 60.0 / lambda; }

ScalarIdentityReport bessel_identity(const BesselLaplaceCase& c) {
  ScalarIdentityReport r;
  r.identity = "bessel";
  r.label = tuple_label({{"beta", c.beta}, {"lambda", c.lambda}, {"t", c.t}});
  const double half = 0.5 * (1.0 + c.beta);
  r.rhs = std::pow(c.t, half) * std::pow(c.lambda, -2.0 - c.beta) * std::exp(-c.t / c.lambda);
  try {
    const BesselOrder order(1.0 + c.beta);
    auto f = [&](double s) {
      return std::exp(-c.lambda * s) * bessel_j(order, 2.0 * std::sqrt(s * c.t)) *
             std::pow(s, half);
    };
    r.lhs = quad::integrate(f, 0.0, exp_cutoff(c.lambda), 1e-14, 1e-13).value;
  } catch (const std::exception& e) {
    r.failure = e.what();
    r.lhs = NAN;
  }
  finish(r);
  return r;
}

ScalarIdentityReport wright_identity(const WrightLaplaceCase& c) {
  ScalarIdentityReport r;
  r.identity = "wright";
  r.label = tuple_label({{"rho", c.rho}, {"nu", c.nu}, {"lambda", c.lambda}, {"t", c.t}});
  const double p = c.nu * c.rho;
  r.rhs = std::pow(c.lambda, -1.0 - p) * std::exp(-c.t * std::pow(c.lambda, -c.rho));
  try {
    const WrightParams wp(c.rho, 1.0 + p);
    auto f = [&](double s) {
      return std::exp(-c.lambda * s) * std::pow(s, p) *
             wright(wp, -c.t * std::pow(s, c.rho)).real();
    };
    r.lhs = quad::integrate(f, 0.0, exp_cutoff(c.lambda), 1e-14, 1e-13).value;
  } catch (const std::exception& e) {
    r.failure = e.what();
    r.lhs = NAN;
  }
  finish(r);
  return r;
}

// int_T^inf e^{-c t} t^g dt = Gamma(g+1, c T) / c^(g+1).
double exp_power_tail(double c, double g, double T) {
  return boost::math::tgamma(g + 1.0, c * T) / std::pow(c, g + 1.0);
}

// Panels [0, 2^-8], ..., [1/2, 1] graded towards the possible algebraic
// singularity at 0, then unit panels.
std::vector<double> laplace_breakpoints(double T) {
  std::vector<double> b{0.0};
  for (int k = -8; k <= 0 && std::ldexp(1.0, k) < T; ++k) b.push_back(std::ldexp(1.0, k));
  while (b.back() + 1.0 < T) b.push_back(b.back() + 1.0);
  b.push_back(T);
  return b;
}

Vec resolvent_formula(const GeneratorMatrix& A, double alpha, double beta, std::complex<double> lambda,
                      const Vec& x) {
  const std::complex<double> la = std::pow(lambda, alpha);
  return std::pow(lambda, alpha - beta - 1.0) * (resolvent(A, la) * x);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double& rms) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - icpt - slope * x[i];
    ss += e * e;
  }
  rms = std::sqrt(ss / n);
  return slope;
}

}  // namespace

ScalarLaplaceGrid ScalarLaplaceGrid::standard() {
  ScalarLaplaceGrid g;
  for (double beta : {0.0, 0.5, 1.0})
    for (double lambda : {1.0, 2.0})
      for (double t : {1.0, 2.0}) g.bessel.push_back({beta, lambda, t});
  const std::pair<double, double> rn[] = {{0.5, 1.0}, {1.0, 0.0}, {0.75, 2.0}};
  for (const auto& [rho, nu] : rn)
    for (double lambda : {1.0, 2.0})
      for (double t : {0.0, 1.0}) g.wright.push_back({rho, nu, lambda, t});
  return g;
}

std::vector<ScalarIdentityReport> verify_scalar_laplace_identities(const ScalarLaplaceGrid& grid) {
  std::vector<ScalarIdentityReport> out;
  for (const auto& c : grid.bessel) out.push_back(bessel_identity(c));
  for (const auto& c : grid.wright) out.push_back(wright_identity(c));
  return out;
}

double wright_decay_exponent(double rho, double mu, double r_lo, double r_hi, int samples) {
  if (!(r_lo > 0.0 && r_hi > r_lo && samples >= 2))
    throw DomainError("wright_decay_exponent: need 0 < r_lo < r_hi and two samples");
  const WrightParams wp(rho, mu);
  const double q = 1.0 / (1.0 + rho);
  double worst = -INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (samples - 1));
    const double v = std::abs(wright(wp, -r));
    worst = std::max(worst, std::log(v) / std::pow(r, q));
  }
  return worst;
}

LaplaceCheckReport laplace_check(const std::function<Vec(double)>& f, const Vec& rhs,
                                 std::complex<double> lambda, double bound, double growth,
                                 double tol, double t_max) {
  const double c = lambda.real();
  if (!(c > 0.0)) throw DomainError("laplace_check: need Re lambda > 0");
  if (!(tol > 0.0)) throw DomainError("laplace_check: tolerance must be positive");
  LaplaceCheckReport r;
  r.lambda = lambda;
  r.rhs = rhs;
  double T = t_max;
  if (T <= 0.0) {
    T = 4.0 / c;
    while (bound * exp_power_tail(c, growth, T) > 0.5 * tol && T < 1e4) T *= 1.25;
  }
  r.tail_estimate = bound * exp_power_tail(c, growth, T);
  if (r.tail_estimate > tol)
    throw TailToleranceUnreachable("laplace_check: tail beyond t_max exceeds the tolerance",
                                   growth);
  r.t_max = T;
  const auto breaks = laplace_breakpoints(T);
  const double panel_tol = 0.25 * tol / double(breaks.size());
  auto g = [&](double t) -> Vec { return std::exp(-lambda * t) * f(t); };
  r.lhs = Vec::Zero(rhs.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    r.lhs += quad::integrate(g, breaks[i], breaks[i + 1], panel_tol, 1e-13).value;
  r.abs_err = (r.lhs - rhs).norm();
  r.rel_err = r.abs_err / std::max(rhs.norm(), 1e-12);
  return r;
}

std::vector<LaplaceCheckReport> verify_family_laplace(const ROFFamily& fam, const Vec& x,
                                                      std::span<const std::complex<double>> lambdas,
                                                      double tol, double t_max) {
  const double M = require_tempered(fam);
  const auto& p = fam.params();
  auto f = [&](double t) -> Vec { return rof_apply(fam, t, x); };
  std::vector<LaplaceCheckReport> out;
  for (const auto& lambda : lambdas)
    out.push_back(laplace_check(f, resolvent_formula(fam.generator(), p.alpha, p.beta, lambda, x),
                                lambda, M * x.norm(), p.beta, tol, t_max));
  return out;
}

std::vector<LaplaceCheckReport> verify_inverse_laplace(const ROFFamily& fam,
                                                       const InverseTransformSpec& spec,
                                                       const Vec& x,
                                                       std::span<const std::complex<double>> lambdas,
                                                       double tol, const QuadratureSpec& q) {
  ROFFamily shared = fam;
  shared.set_tempered_bound(require_tempered(fam));
  const GeneratorMatrix inverse(fam.generator().inverse_entries());
  // Target family of A^{-1}: orders (alpha, gamma) for the Bessel kernel,
  // (gamma, 0) for Wright subordination and (alpha, 0) for the analytic case.
  double alpha = fam.params().alpha, beta = spec.target_gamma;
  if (spec.kind == TransformKind::wright_subordinated) {
    alpha = spec.target_gamma;
    beta = 0.0;
  }
  const ROFFamily target(inverse, ROFParams(alpha, beta));
  const double M = require_tempered(target);
  auto f = [&](double t) -> Vec {
    if (t == 0.0) return spec.kind == TransformKind::bessel_integrated ? Vec::Zero(x.size()) : x;
    switch (spec.kind) {
      case TransformKind::bessel_integrated:
        return bessel_inverse_rof(shared, spec.target_gamma, x, t, q).value;
      case TransformKind::wright_subordinated:
        return wright_inverse_rof(shared, spec.target_gamma, x, t, q).value;
      case TransformKind::analytic_derivative:
        break;
    }
    return analytic_inverse_rof(shared, x, t, q).value;
  };
  std::vector<LaplaceCheckReport> out;
  for (const auto& lambda : lambdas)
    out.push_back(laplace_check(f, resolvent_formula(inverse, alpha, beta, lambda, x), lambda,
                                M * x.norm(), beta, tol));
  return out;
}

std::vector<std::complex<double>> sector_probes(double angle) {
  if (!(angle >= 0.0 && angle < pi)) throw DomainError("sector_probes: angle must lie in [0, pi)");
  std::vector<std::complex<double>> z;
  for (int k = 0; k < 8; ++k) {
    const double psi = angle + (k + 1) * (pi - angle) / 9.0;
    for (int i = 0; i < 40; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * i / 39.0);
      z.push_back(std::polar(r, psi));
      z.push_back(std::polar(r, -psi));
    }
  }
  return z;
}

SectorialReport check_sectorial(const GeneratorMatrix& A, double angle) {
  const auto probes = sector_probes(angle);
  return check_sectorial(A, probes);
}

SectorialReport check_sectorial(const GeneratorMatrix& A,
                                std::span<const std::complex<double>> probes) {
  SectorialReport rep;
  for (const auto& z : probes) {
    try {
      // z (z + A)^{-1} = -z (-z - A)^{-1}.
      const double v = std::abs(z) * spectral_norm(resolvent(A, -z));
      ++rep.probes;
      if (v > rep.sup) {
        rep.sup = v;
        rep.argmax = z;
      }
    } catch (const NearSpectrum&) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "skipped near-spectrum probe z = %.6g%+.6gi", z.real(),
                    z.imag());
      rep.notes.emplace_back(buf);
    }
  }
  return rep;
}

double expected_decay_slope(const ROFParams& p) {
  if (p.alpha == 2.0) return std::max(0.0, p.beta - 2.0);
  if (p.alpha > 1.0 && std::abs(p.beta + 1.0 - p.alpha) < 1e-12) return -p.alpha - 1.0;
  return p.beta - p.alpha;
}

DecayFitReport fit_decay(const ROFFamily& fam, double t_lo, double t_hi, int samples) {
  if (!(t_lo >= 10.0 && t_hi >= 100.0 * t_lo))
    throw DomainError("fit_decay: window must start at t >= 10 and span two decades");
  if (samples < 3) throw DomainError("fit_decay: need at least three samples");
  DecayFitReport rep;
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.expected_slope = expected_decay_slope(fam.params());
  rep.envelope = fam.params().alpha == 2.0;
  // Longest oscillation period of cos(t sqrt(-A)).
  double period = 0.0;
  if (rep.envelope) {
    const auto& eig = fam.generator().eigenvalues();
    for (Eigen::Index k = 0; k < eig.size(); ++k) {
      const double w = std::abs(std::sqrt(-eig(k)).real());
      if (w > 0.0) period = std::max(period, 2.0 * pi / w);
    }
  }
  auto norm_at = [&](double t) { return spectral_norm(rof_eval(fam, t)); };
  std::vector<double> lx, ly;
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, double(i) / (samples - 1));
    double v = norm_at(t);
    if (period > 0.0) {
      // Local maximum over one period ending at t.
      for (int j = 1; j < 64; ++j) v = std::max(v, norm_at(t - period * j / 64.0));
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(v));
  }
  rep.fitted_slope = least_squares_slope(lx, ly, rep.residual);
  return rep;
}

LimitReport check_limits(const ROFFamily& fam, const Vec& x, std::span<const double> small_t,
                         std::span<const double> large_t) {
  const auto& p = fam.params();
  LimitReport rep;
  const Vec start = x * rgamma(p.beta + 1.0);
  for (double t : small_t) {
    if (!(t > 0.0)) throw DomainError("check_limits: times must be positive");
    rep.small_t.push_back(t);
    rep.small_deviation.push_back((rof_apply(fam, t, x) / std::pow(t, p.beta) - start).norm());
  }
  // I^alpha R_{alpha,beta} = R_{alpha,alpha+beta}.
  const ROFFamily integrated = fam.with_params(ROFParams(p.alpha, p.alpha + p.beta));
  for (double t : large_t) {
    if (!(t > 0.0)) throw DomainError("check_limits: times must be positive");
    rep.large_t.push_back(t);
    rep.large_ratio.push_back(rof_apply(integrated, t, x).norm() / std::pow(t, p.alpha + p.beta));
  }
  return rep;
}

std::vector<double> resolvent_equation_defect(const ROFFamily& fam, const Vec& x,
                                              std::span<const double> times,
                                              std::size_t intervals) {
  if (times.empty()) return {};
  const auto& p = fam.params();
  const double T = *std::max_element(times.begin(), times.end());
  if (!(T > 0.0)) throw DomainError("resolvent_equation_defect: need a positive time");
  const auto grid = uniform_grid(T, intervals);
  const Vec Ax = fam.generator().entries() * x;
  const Trajectory integral =
      frac_integral(sample_family(fam, grid, Ax), FracOrder(p.alpha), family_starting_terms(p));
  std::vector<double> out;
  for (double t : times) {
    const double pos = t / T * double(intervals);
    const auto idx = std::size_t(std::llround(pos));
    if (std::abs(pos - double(idx)) > 1e-9)
      throw DomainError("resolvent_equation_defect: times must be grid nodes");
    const Vec lhs = rof_apply(fam, t, x);
    const Vec rhs = std::pow(t, p.beta) * rgamma(p.beta + 1.0) * x + Vec(integral.values[idx]);
    out.push_back((lhs - rhs).norm());
  }
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("INVROF_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return unsigned(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_concurrently(std::span<const std::function<void()>> jobs, unsigned workers) {
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(jobs.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace invrof

namespace invrof {

namespace {

struct Pair {
  double alpha, beta;
};

std::string params_label(const std::string& gen, double alpha, double beta) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s (alpha=%g, beta=%g)", gen.c_str(), alpha, beta);
  return buf;
}

CheckResult make_check(std::string suite, std::string name, double value, double threshold,
                       std::string detail = {}) {
  CheckResult c{std::move(suite), std::move(name), value, threshold, value < threshold,
                std::move(detail)};
  return c;
}

bool tempered(const GeneratorMatrix& A, double alpha, double beta) {
  return !probe_tempered(ROFFamily(A, ROFParams(alpha, beta))).unbounded_growth;
}

Vec ones(Eigen::Index n) { return Vec::Ones(n); }

using Job = std::function<CheckResult()>;

std::vector<Job> scalar_jobs() {
  std::vector<Job> jobs;
  const auto grid = ScalarLaplaceGrid::standard();
  for (const auto& c : grid.bessel)
    jobs.emplace_back([c] {
      const auto r = verify_scalar_laplace_identities({{c}, {}}).front();
      return make_check("scalar", "bessel " + r.label, r.failure.empty() ? r.abs_err : INFINITY,
                        1e-8, r.failure);
    });
  for (const auto& c : grid.wright)
    jobs.emplace_back([c] {
      const auto r = verify_scalar_laplace_identities({{}, {c}}).front();
      return make_check("scalar", "wright " + r.label, r.failure.empty() ? r.rel_err : INFINITY,
                        1e-7, r.failure);
    });
  return jobs;
}

std::vector<Job> wright_jobs() {
  std::vector<Job> jobs;
  for (double rho : {0.25, 0.5, 0.75})
    jobs.emplace_back([rho] {
      char name[64];
      std::snprintf(name, sizeof name, "decay exponent rho=%g", rho);
      return make_check("wright", name, wright_decay_exponent(rho, 1.0), 0.0);
    });
  return jobs;
}

std::vector<Job> laplace_jobs() {
  std::vector<Job> jobs;
  for (const auto& g : default_corpus())
    for (Pair p : {Pair{1, 0}, Pair{0.5, 0}, Pair{1.5, 0.5}, Pair{2, 1}}) {
      if (!tempered(g.matrix, p.alpha, p.beta)) continue;
      for (double lambda : {0.5, 1.0, 2.0})
        jobs.emplace_back([g, p, lambda] {
          const ROFFamily fam(g.matrix, ROFParams(p.alpha, p.beta));
          const std::complex<double> l[] = {lambda};
          const auto r = verify_family_laplace(fam, ones(g.matrix.dim()), l, 1e-8).front();
          char name[160];
          std::snprintf(name, sizeof name, "%s lambda=%g",
                        params_label(g.name, p.alpha, p.beta).c_str(), lambda);
          return make_check("laplace", name, r.rel_err, 1e-6);
        });
    }
  return jobs;
}

std::vector<Job> sectorial_jobs() {
  std::vector<Job> jobs;
  for (const auto& g : default_corpus())
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      if (!tempered(g.matrix, alpha, 0.0)) continue;
      jobs.emplace_back([g, alpha] {
        const auto r = check_sectorial(g.matrix, pi - alpha * pi / 2.0);
        char name[128];
        std::snprintf(name, sizeof name, "%s alpha=%g", g.name.c_str(), alpha);
        return make_check("sectorial", name, r.sup, 10.0,
                          r.notes.empty() ? std::string{} : r.notes.front());
      });
    }
  return jobs;
}

std::vector<Job> decay_jobs() {
  std::vector<Job> jobs;
  const GeneratorMatrix A = parse_generator("diag:-1");
  for (Pair p : {Pair{0.5, 0}, Pair{1, 1}, Pair{1.5, 0}, Pair{1.5, 0.5}, Pair{2, 1.5}})
    jobs.emplace_back([A, p] {
      const auto r = fit_decay(ROFFamily(A, ROFParams(p.alpha, p.beta)), 1e2, 1e4);
      const bool loose = p.alpha == 2.0 || std::abs(p.beta + 1.0 - p.alpha) < 1e-12;
      char detail[96];
      std::snprintf(detail, sizeof detail, "fitted %.6f expected %.6f%s", r.fitted_slope,
                    r.expected_slope, r.envelope ? " (envelope)" : "");
      return make_check("decay", params_label("diag:-1", p.alpha, p.beta),
                        std::abs(r.fitted_slope - r.expected_slope), loose ? 0.1 : 0.05, detail);
    });
  return jobs;
}

std::vector<Job> limit_jobs() {
  std::vector<Job> jobs;
  for (const auto& g : default_corpus())
    for (Pair p : {Pair{1.5, 0}, Pair{1.5, 0.5}, Pair{2, 1}}) {
      const std::string label = params_label(g.name, p.alpha, p.beta);
      const double small[] = {1e-3};
      const double large[] = {125.0, 250.0, 500.0, 1000.0};
      jobs.emplace_back([=] {
        const auto r = check_limits(ROFFamily(g.matrix, ROFParams(p.alpha, p.beta)),
                                    ones(g.matrix.dim()), small, {});
        return make_check("limits", label + " small t", r.small_deviation.front(), 1e-3);
      });
      jobs.emplace_back([=] {
        const auto r = check_limits(ROFFamily(g.matrix, ROFParams(p.alpha, p.beta)),
                                    ones(g.matrix.dim()), {}, large);
        const bool decreasing =
            std::is_sorted(r.large_ratio.rbegin(), r.large_ratio.rend(), std::less_equal<>());
        return make_check("limits", label + " large t",
                          decreasing ? r.large_ratio.back() : INFINITY, 1e-2,
                          decreasing ? "" : "ratio not decreasing over the doubling sequence");
      });
    }
  return jobs;
}

std::vector<Job> resolvent_jobs() {
  std::vector<Job> jobs;
  for (const auto& g : default_corpus())
    for (Pair p : {Pair{0.5, 0}, Pair{1.5, 0.5}, Pair{2, 1}})
      jobs.emplace_back([g, p] {
        const double times[] = {0.5, 1.0, 1.5, 2.0};
        const auto d = resolvent_equation_defect(ROFFamily(g.matrix, ROFParams(p.alpha, p.beta)),
                                                 ones(g.matrix.dim()), times, 2000);
        return make_check("resolvent", params_label(g.name, p.alpha, p.beta),
                          *std::max_element(d.begin(), d.end()), 1e-5);
      });
  return jobs;
}

}  // namespace

std::vector<NamedGenerator> default_corpus() {
  std::vector<NamedGenerator> out;
  for (const char* spec :
       {"diag:-1", "diag:-2", "diag:-1,-4", "jordan:-2:2", "laplacian_1d:4:1:1"})
    out.push_back({spec, parse_generator(spec)});
  return out;
}

std::vector<std::string> verification_suites() {
  return {"scalar", "wright", "laplace", "sectorial", "decay", "limits", "resolvent"};
}

std::vector<CheckResult> run_verification_suite(const std::string& suite, unsigned workers) {
  std::vector<Job> jobs;
  auto append = [&](std::vector<Job> more) {
    for (auto& j : more) jobs.push_back(std::move(j));
  };
  const bool all = suite == "all";
  bool known = all;
  const std::pair<const char*, std::vector<Job> (*)()> table[] = {
      {"scalar", scalar_jobs},       {"wright", wright_jobs}, {"laplace", laplace_jobs},
      {"sectorial", sectorial_jobs}, {"decay", decay_jobs},   {"limits", limit_jobs},
      {"resolvent", resolvent_jobs}};
  for (const auto& [name, make] : table)
    if (all || suite == name) {
      append(make());
      known = true;
    }
  if (!known) throw DomainError("unknown verification suite: " + suite);

  std::vector<CheckResult> results(jobs.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < jobs.size(); ++i)
    tasks.emplace_back([&, i] {
      try {
        results[i] = jobs[i]();
      } catch (const std::exception& e) {
        results[i] = CheckResult{suite, "job " + std::to_string(i), INFINITY, 0.0, false, e.what()};
      }
    });
  run_concurrently(tasks, workers);
  return results;
}

}  // namespace invrof
