#include "invrof/rof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "invrof/error.hpp"
#include "invrof/matfun.hpp"
#include "invrof/specfun.hpp"

namespace invrof {

ROFParams::ROFParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("ROFParams: alpha must lie in (0, 2]");
  if (!(beta >= 0.0)) throw DomainError("ROFParams: beta must be nonnegative");
}

ROFFamily::ROFFamily(GeneratorMatrix generator, ROFParams params, Backend backend)
    : generator_(std::move(generator)), params_(params), backend_(backend) {}

void ROFFamily::set_tempered_bound(double M) {
  if (!tempered_bound_) tempered_bound_ = M;
}

ROFFamily ROFFamily::with_params(ROFParams params) const {
  return ROFFamily(generator_, params, backend_);
}

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXcd identity(Eigen::Index n) { return Eigen::MatrixXcd::Identity(n, n); }

// Scalar t^shift E_{alpha,b}(t^alpha lambda).
cplx scalar_family(double alpha, double b, double shift, double t, cplx lambda) {
  return std::pow(t, shift) * mittag_leffler_derivative(alpha, b, std::pow(t, alpha) * lambda, 0);
}

// t^shift E_{alpha,b}(t^alpha A) through the Schur form of A.
Eigen::MatrixXcd spectral(const GeneratorMatrix& A, double alpha, double b, double shift,
                          double t) {
  if (A.normal()) {
    const auto& lam = A.eigenvalues();
    Eigen::VectorXcd d(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) d(k) = scalar_family(alpha, b, shift, t, lam(k));
    return A.schur_basis() * d.asDiagonal() * A.schur_basis().adjoint();
  }
  return std::pow(t, shift) *
         mittag_leffler_matrix_derivative(alpha, b, A.entries(), std::pow(t, alpha), 0,
                                          MatrixMethod::schur);
}

Eigen::VectorXcd spectral_apply(const GeneratorMatrix& A, double alpha, double b, double shift,
                                double t, const Eigen::VectorXcd& x) {
  if (!A.normal()) return spectral(A, alpha, b, shift, t) * x;
  const auto& Q = A.schur_basis();
  Eigen::VectorXcd y = Q.adjoint() * x;
  const auto& lam = A.eigenvalues();
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (y(k) != cplx(0.0)) y(k) *= scalar_family(alpha, b, shift, t, lam(k));
  return Q * y;
}

// Bromwich inversion of lambda^(alpha-beta-1) (lambda^alpha - A)^{-1} on the
// parabola lambda(u) = mu (1 + i u)^2 with the trapezoidal rule.
Eigen::MatrixXcd laplace_inversion(const GeneratorMatrix& A, const ROFParams& p, double t) {
  std::vector<cplx> poles;
  for (Eigen::Index k = 0; k < A.eigenvalues().size(); ++k) {
    const cplx lam = A.eigenvalues()(k);
    if (std::abs(lam) == 0.0) continue;
    // Poles of the transform on the principal sheet: lambda^alpha = lam.
    const double arg = std::arg(lam) / p.alpha;
    if (std::abs(arg) >= pi) continue;
    poles.push_back(std::polar(std::pow(std::abs(lam), 1.0 / p.alpha), arg));
  }
  // In the parameter u a pole sits at distance |1 - Re sqrt(pole/mu)| from the
  // real axis; the trapezoidal error decays like exp(-2 pi d / h). Take the
  // smallest mu for which the node count that resolves every pole is still
  // compatible with the branch-cut balance mu >= pi N / (12 t).
  int N = 35;
  double mu = pi * N / (12.0 * t);
  for (int iter = 0; iter < 2000; ++iter) {
    double d = 1.0;
    bool inside = true;
    for (const cplx& pole : poles) {
      const double gap = 1.0 - std::sqrt(pole / mu).real();
      if (gap <= 0.0) inside = false;
      d = std::min(d, gap);
    }
    if (inside) {
      const int need = int(std::ceil(std::max(35.0, 17.2 / d)));
      if (need <= int(std::floor(12.0 * mu * t / pi))) {
        N = need;
        break;
      }
    }
    mu *= 1.02;
  }
  if (mu * t > 25.0)
    throw ContourPlacementError(
        "laplace_inversion: spectrum forces the contour too far right for this t; use the "
        "series or spectral backend");
  const double h = 3.0 / N;
  const Eigen::Index n = A.dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (int k = -N; k <= N; ++k) {
    const double u = k * h;
    const cplx w(1.0, u);
    const cplx lambda = mu * w * w;
    const cplx la = std::pow(lambda, p.alpha);
    const Eigen::MatrixXcd F =
        (la * identity(n) - A.entries()).partialPivLu().solve(identity(n)) *
        std::pow(lambda, p.alpha - p.beta - 1.0);
    sum += (std::exp(lambda * t) * w) * F;
  }
  return sum * (h * mu / pi);
}

bool ratio_grows(std::span<const double> grid, std::span<const double> ratio) {
  for (double r : ratio)
    if (!std::isfinite(r)) return true;
  const std::size_t last = ratio.size() - 1;
  const double t_ref = grid[last] / 10.0;
  std::size_t ref = 0;
  while (ref + 1 < last && grid[ref + 1] <= t_ref) ++ref;
  if (ref >= last || grid[ref] <= 0.0) return false;
  const double peak_before = *std::max_element(ratio.begin(), ratio.begin() + ref + 1);
  const double peak_after = *std::max_element(ratio.begin() + ref + 1, ratio.end());
  return peak_after > 1.5 * peak_before;
}

}  // namespace

Eigen::MatrixXcd rof_eval(const ROFFamily& fam, double t) { return rof_eval(fam, t, fam.backend()); }

Eigen::MatrixXcd rof_eval(const ROFFamily& fam, double t, Backend backend) {
  if (!(t >= 0.0)) throw DomainError("rof_eval: t must be nonnegative");
  const auto& A = fam.generator();
  const auto& p = fam.params();
  if (t == 0.0) return p.beta == 0.0 ? identity(A.dim()) : Eigen::MatrixXcd::Zero(A.dim(), A.dim());
  switch (backend) {
    case Backend::ml_series:
      return std::pow(t, p.beta) * mittag_leffler_matrix(MLParams(p.alpha, p.beta + 1.0),
                                                         A.entries(), std::pow(t, p.alpha),
                                                         MatrixMethod::series);
    case Backend::laplace_inversion:
      return laplace_inversion(A, p, t);
    case Backend::automatic:
      break;
  }
  return spectral(A, p.alpha, p.beta + 1.0, p.beta, t);
}

Eigen::VectorXcd rof_apply(const ROFFamily& fam, double t, const Eigen::VectorXcd& x) {
  if (fam.backend() != Backend::automatic || t == 0.0) return rof_eval(fam, t) * x;
  const auto& p = fam.params();
  return spectral_apply(fam.generator(), p.alpha, p.beta + 1.0, p.beta, t, x);
}

Eigen::VectorXcd rof_derivative_apply(const ROFFamily& fam, double t, const Eigen::VectorXcd& x) {
  if (!(t > 0.0)) throw DomainError("rof_derivative: t must be positive");
  const auto& p = fam.params();
  return spectral_apply(fam.generator(), p.alpha, p.beta, p.beta - 1.0, t, x);
}

Trajectory sample_family(const ROFFamily& fam, std::span<const double> grid,
                         const Eigen::VectorXcd& x, int interpolation_order) {
  std::vector<Eigen::MatrixXcd> values;
  values.reserve(grid.size());
  for (double t : grid) values.emplace_back(rof_apply(fam, t, x));
  return Trajectory(std::vector<double>(grid.begin(), grid.end()), std::move(values),
                    interpolation_order);
}

StartingTerms family_starting_terms(const ROFParams& params, int count) {
  StartingTerms s;
  for (int k = 0; k < count; ++k) {
    const double e = params.beta + k * params.alpha;
    if (e >= 6.0) break;
    s.exponents.push_back(e);
  }
  return s;
}

Trajectory deintegrate(const ROFFamily& fam, std::span<const double> grid, double delta,
                       const Eigen::VectorXcd& x, int interpolation_order) {
  const auto& p = fam.params();
  if (!(delta >= 0.0 && delta < p.beta))
    throw DomainError("deintegrate: need 0 <= delta < beta");
  const Trajectory f = sample_family(fam, grid, x, interpolation_order);
  // The family must vanish at 0; higher initial derivatives vanish with it
  // because beta exceeds every order below ceil(beta - delta).
  double scale = 0.0;
  for (const auto& v : f.values) scale = std::max(scale, v.norm());
  if (f.values.front().norm() > 1e-10 * std::max(scale, 1e-300))
    throw InitialConditionViolation("deintegrate: sampled family does not vanish at t = 0");
  return caputo_derivative(f, FracOrder(p.beta - delta), family_starting_terms(p));
}

TemperedFit fit_tempered_bound(ROFFamily& fam, std::span<const double> grid) {
  std::vector<double> ts, ratio;
  const double beta = fam.params().beta;
  for (double t : grid) {
    if (t <= 0.0) continue;
    const double r = spectral_norm(rof_eval(fam, t)) / std::pow(t, beta);
    ts.push_back(t);
    ratio.push_back(r);
  }
  if (ts.empty()) throw DomainError("fit_tempered_bound: grid has no positive times");
  TemperedFit fit;
  fit.unbounded_growth = ratio_grows(ts, ratio);
  for (double r : ratio) fit.bound = std::isfinite(r) ? std::max(fit.bound, r) : INFINITY;
  if (!fit.unbounded_growth) fam.set_tempered_bound(fit.bound);
  return fit;
}

TemperedFit probe_tempered(const ROFFamily& fam) {
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(std::pow(10.0, -3.0 + 0.1 * k));
  ROFFamily copy = fam;
  return fit_tempered_bound(copy, grid);
}

}  // namespace invrof
