#include "invrof/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "invrof/error.hpp"
#include "invrof/matfun.hpp"
#include "invrof/quadrature.hpp"
#include "invrof/specfun.hpp"

namespace invrof {

void QuadratureSpec::validate() const {
  if (!(s_max >= 0.0) || !std::isfinite(s_max))
    throw DomainError("QuadratureSpec: s_max must be finite and nonnegative");
  if (nodes_per_oscillation < 8) throw DomainError("QuadratureSpec: nodes_per_oscillation >= 8");
  if (!(tail_tolerance > 0.0) || !(panel_tolerance > 0.0))
    throw DomainError("QuadratureSpec: tolerances must be positive");
}

InverseTransformSpec::InverseTransformSpec(ROFParams source_, double target_gamma_,
                                           TransformKind kind_)
    : source(source_), target_gamma(target_gamma_), kind(kind_) {
  switch (kind) {
    case TransformKind::bessel_integrated:
      if (!(target_gamma > source.beta + 0.5))
        throw HypothesisViolation("bessel transform needs gamma > beta + 1/2");
      break;
    case TransformKind::wright_subordinated:
      if (!(target_gamma > 0.0 && target_gamma < source.alpha))
        throw HypothesisViolation("wright transform needs 0 < gamma < alpha");
      break;
    case TransformKind::analytic_derivative:
      if (source.beta != 0.0 || target_gamma != 0.0)
        throw HypothesisViolation("analytic transform acts on beta = 0 families with gamma = 0");
      break;
  }
}

namespace {

constexpr double pi = std::numbers::pi;
constexpr double default_gap = 0.55;  // gamma - beta guard below which the kernel tail is too heavy

using Vec = Eigen::VectorXcd;

struct Piece {
  Vec value;
  double error = 0.0;
};

template <class F>
Vec gauss_apply(F& f, double a, double b, const quad::GaussRule& rule) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Vec sum = f(c + h * rule.nodes[0]) * (h * rule.weights[0]);
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) sum += f(c + h * rule.nodes[i]) * (h * rule.weights[i]);
  return sum;
}

// Adaptive bisection: accept a panel when the rule on the two halves agrees
// with the rule on the whole, or when bisection stops reducing the
// discrepancy (the integrand's own rounding level has been reached).
template <class F>
Piece gauss_adaptive(F& f, double a, double b, const Vec& whole, const quad::GaussRule& rule,
                     double abs_tol, int depth, double parent_diff) {
  const double m = 0.5 * (a + b);
  Vec left = gauss_apply(f, a, m, rule);
  Vec right = gauss_apply(f, m, b, rule);
  Vec both = left + right;
  const double diff = (both - whole).norm();
  if (diff <= abs_tol || depth >= 16 || (depth >= 3 && diff > 0.6 * parent_diff))
    return {both, diff};
  Piece l = gauss_adaptive(f, a, m, left, rule, 0.5 * abs_tol, depth + 1, diff);
  Piece r = gauss_adaptive(f, m, b, right, rule, 0.5 * abs_tol, depth + 1, diff);
  return {l.value + r.value, l.error + r.error};
}

template <class F>
Piece integrate_panel(F& f, double a, double b, const quad::GaussRule& rule, double rel_tol,
                      double scale) {
  Vec whole = gauss_apply(f, a, b, rule);
  const double tol = rel_tol * std::max(scale, whole.norm());
  return gauss_adaptive(f, a, b, whole, rule, tol, 0, INFINITY);
}

struct Oscillatory {
  Vec value;
  double error = 0.0;
  std::vector<double> splits;
};

// Integral of f over [u0, u_end) split at the zeros of J_nu beyond u0. With an
// infinite u_end the partial sums over panels are extrapolated by the epsilon
// algorithm until stable.
template <class F>
Oscillatory integrate_zero_panels(F& f, BesselZeros& zeros, double u0, double u_end,
                                  const QuadratureSpec& q, Eigen::Index dim) {
  const quad::GaussRule rule = quad::gauss_legendre(q.nodes_per_oscillation);
  const bool infinite = !std::isfinite(u_end);
  Oscillatory out;
  out.value = Vec::Zero(dim);
  std::vector<quad::WynnEpsilon> wynn(dim);
  Vec previous_estimate = Vec::Zero(dim);
  int stable = 0, negligible = 0;
  double scale = 0.0;
  std::size_t k = 0;
  while (zeros[k] <= u0) ++k;
  double a = u0;
  out.splits.push_back(a);
  for (int panel = 0;; ++panel, ++k) {
    if (panel > 5000)
      throw TailToleranceUnreachable("oscillatory tail did not settle within 5000 panels", 0.0);
    double b = zeros[k];
    const bool last = !infinite && b >= u_end;
    if (last) b = u_end;
    Piece p = integrate_panel(f, a, b, rule, q.panel_tolerance, scale);
    out.value += p.value;
    out.error += p.error;
    out.splits.push_back(b);
    scale = std::max(scale, p.value.norm());
    a = b;
    if (last) return out;
    if (!infinite) continue;

    const double sum_norm = std::max(out.value.norm(), 1e-300);
    negligible = p.value.norm() <= 1e-3 * q.tail_tolerance * sum_norm ? negligible + 1 : 0;
    if (negligible >= 3) return out;

    Vec estimate(dim);
    double wynn_error = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      wynn[i].push(out.value(i));
      estimate(i) = wynn[i].estimate();
      wynn_error += wynn[i].error();
    }
    const double change = (estimate - previous_estimate).norm();
    previous_estimate = estimate;
    if (panel >= 6 && change <= q.tail_tolerance * std::max(estimate.norm(), 1e-300) &&
        wynn_error <= q.tail_tolerance * std::max(estimate.norm(), 1e-300) * 10.0)
      ++stable;
    else
      stable = 0;
    if (stable >= 3) {
      out.error += change + wynn_error;
      out.value = estimate;
      return out;
    }
  }
}

}  // namespace

double require_tempered(const ROFFamily& fam) {
  if (!fam.generator().injective())
    throw HypothesisViolation("generator is not injective; A^{-1} does not exist");
  if (auto M = fam.tempered_bound()) return *M;
  const TemperedFit fit = probe_tempered(fam);
  if (fit.unbounded_growth)
    throw HypothesisViolation("family is not tempered: ||R(t)||/t^beta grows on [1e-3, 1e3]");
  return fit.bound;
}

TransformResult bessel_inverse_rof(const ROFFamily& fam, double gamma, const Vec& x, double t,
                                   const QuadratureSpec& q) {
  q.validate();
  const auto& p = fam.params();
  if (!(t > 0.0)) throw DomainError("bessel_inverse_rof: t must be positive");
  if (!(gamma >= p.beta + default_gap))
    throw HypothesisViolation("bessel_inverse_rof: gamma must be at least beta + 0.55 (kernel "
                              "leaves L^1 as gamma approaches beta + 1/2)");
  const double M = require_tempered(fam);
  const double nu = 1.0 + p.beta + gamma;
  const Eigen::Index n = fam.generator().dim();

  TransformResult res;
  res.used = q;
  const Vec base = std::pow(t, gamma) * rgamma(gamma + 1.0) * x;
  if (x.norm() == 0.0) {
    res.value = Vec::Zero(n);
    return res;
  }

  // u = 2 sqrt(s t): int_0^S g R x ds = c int_0^U J_nu(u) u^(1-nu) R(u^2/4t) x du.
  auto f = [&](double u) -> Vec {
    const double s = u * u / (4.0 * t);
    return (bessel_j(BesselOrder(nu), u) * std::pow(u, 1.0 - nu)) * rof_apply(fam, s, x);
  };
  const double c = std::pow(2.0 * std::sqrt(t), nu) / (2.0 * t);
  const double front = std::pow(t, 0.5 * nu);
  const double target = q.tail_tolerance * std::max(base.norm(), 1e-300);
  BesselZeros zeros(nu);

  double S = q.s_max;
  const bool cosine_like = p.alpha == 2.0;
  if (S == 0.0 && cosine_like) {
    const double inv_norm = spectral_norm(fam.generator().inverse_entries());
    S = std::max(30.0 * t * inv_norm, 1.0);
  }
  const double U = S > 0.0 ? 2.0 * std::sqrt(S * t) : INFINITY;
  Oscillatory head = integrate_zero_panels(f, zeros, 0.0, U, q, n);
  Vec integral = c * head.value;
  double error = c * head.error;
  res.used.split_points.clear();
  for (double u : head.splits) res.used.split_points.push_back(u * u / (4.0 * t));
  res.used.s_max = S;

  if (S > 0.0 && cosine_like) {
    // Tail by repeated integration by parts using R'' = A R + s^(beta-2)/Gamma(beta-1)
    // and d/ds g_mu = -sqrt(t) g_{mu+1}, g_mu(s) = s^(-mu/2) J_mu(2 sqrt(st)).
    const Eigen::MatrixXcd& Ainv = fam.generator().inverse_entries();
    const double inv_norm = spectral_norm(Ainv);
    const double w = 2.0 * std::sqrt(S * t);
    auto g = [&](double mu) { return std::pow(S, -0.5 * mu) * bessel_j(BesselOrder(mu), w); };
    const Vec RS = rof_apply(fam, S, x);
    const Vec dRS = rof_derivative_apply(fam, S, x);
    const double forcing = rgamma(p.beta - 1.0);
    Vec tail = Vec::Zero(n);
    double bound = INFINITY;
    int K = 0;
    for (; K < 200; ++K) {
      const double mu = nu + 2.0 * K;
      Vec term = -g(mu) * dRS - std::sqrt(t) * g(mu + 1.0) * RS;
      if (forcing != 0.0) {
        // int_S^inf s^(beta-2) g_mu(s) ds in the u variable.
        BesselZeros fz(mu);
        auto h = [&](double u) -> Vec {
          const double s = u * u / (4.0 * t);
          Vec v(1);
          v(0) = bessel_j(BesselOrder(mu), u) * std::pow(s, p.beta - 2.0 - 0.5 * mu) * u / (2.0 * t);
          return v;
        };
        const Oscillatory F = integrate_zero_panels(h, fz, w, INFINITY, q, 1);
        term -= (forcing * F.value(0)) * x;
        error += std::pow(t * inv_norm, K) * std::pow(inv_norm, 1.0) * std::abs(forcing) *
                 F.error * x.norm();
      }
      for (int j = 0; j <= K; ++j) term = Ainv * term;
      tail += std::pow(t, K) * term;
      const double m_next = 0.5 * (nu + 2.0 * (K + 1));
      if (m_next > p.beta + 1.0) {
        bound = std::pow(t * inv_norm, K + 1) * M * x.norm() *
                std::pow(S, p.beta + 1.0 - m_next) / (m_next - p.beta - 1.0);
        if (front * bound <= 1e-3 * target) break;
      }
    }
    integral += tail;
    error += bound;
  } else if (S > 0.0) {
    // User truncation: bound the tail with |J_nu(r)| <= r^(-1/2) sqrt(2/pi) * 1.1.
    const double exponent = 0.5 * (p.beta - gamma) - 0.75;
    const double amp = 1.1 * std::sqrt(2.0 / pi) * std::pow(4.0 * t, -0.25);
    const double tail = M * x.norm() * amp * std::pow(S, exponent + 1.0) / (-(exponent + 1.0));
    if (front * tail > target)
      throw TailToleranceUnreachable("bessel_inverse_rof: truncation at s_max leaves a tail above "
                                     "tail_tolerance",
                                     exponent);
    error += tail;
  }

  res.value = base - front * integral;
  res.error = front * error;
  return res;
}

WrightDecay fit_wright_decay(double rho, double mu) {
  const double q = 1.0 / (1.0 + rho);
  const WrightParams wp(rho, mu);
  double scale = 0.0;
  for (int i = 0; i <= 50; ++i) scale = std::max(scale, std::abs(wright(wp, -0.1 * i)));
  scale = std::max(2.0 * scale, 1e-300);
  double rate = INFINITY;
  for (int i = 0; i <= 60; ++i) {
    const double r = 5.0 * std::pow(10.0, i / 60.0);
    const double v = std::abs(wright(wp, -r));
    if (v == 0.0) continue;
    rate = std::min(rate, (std::log(scale) - std::log(v)) / std::pow(r, q));
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    // Asymptotic envelope exp(sigma r^q cos(pi q)).
    const double sigma = (1.0 + rho) * std::pow(rho, -rho / (1.0 + rho));
    rate = -sigma * std::cos(pi * q);
  }
  return {0.9 * rate, scale};
}

TransformResult wright_inverse_rof(const ROFFamily& fam, double gamma, const Vec& x, double t,
                                   const QuadratureSpec& q) {
  q.validate();
  const auto& p = fam.params();
  if (!(t > 0.0)) throw DomainError("wright_inverse_rof: t must be positive");
  if (!(gamma > 0.0 && gamma < p.alpha))
    throw HypothesisViolation("wright_inverse_rof: need 0 < gamma < alpha");
  const double M = require_tempered(fam);
  const Eigen::Index n = fam.generator().dim();
  const double rho = gamma / p.alpha;
  const double mu = 1.0 + rho * (1.0 + p.beta);
  const double qexp = 1.0 / (1.0 + rho);
  const double t_rho = std::pow(t, rho);
  const WrightParams wp(rho, mu);

  TransformResult res;
  res.used = q;
  if (x.norm() == 0.0) {
    res.value = Vec::Zero(n);
    return res;
  }
  // r = s t^rho: x - t^(rho beta) int_0^inf phi(rho, mu; -r) R(r / t^rho) x dr.
  auto f = [&](double r) -> Vec {
    return wright(wp, -r).real() * rof_apply(fam, r / t_rho, x);
  };
  const WrightDecay decay = fit_wright_decay(rho, mu);
  const double front = std::pow(t, rho * p.beta);
  const double target = q.tail_tolerance * x.norm();
  auto tail_bound = [&](double r) -> double {
    // int_r^inf L exp(-a u^q) M (u/t^rho)^beta du with v = u^q becomes
    // int L M t^(-rho beta)/q exp(-a v) v^e dv, bounded by exp(-aV) V^e 2/a
    // once a - e/V >= a/2.
    const double a = decay.rate;
    const double e = (p.beta + 1.0) / qexp - 1.0;
    const double v = std::pow(r, qexp);
    if (v < 2.0 * e / a) return INFINITY;
    return decay.scale * M * std::pow(t_rho, -p.beta) / qexp * std::exp(-a * v) *
           std::pow(v, e) * (2.0 / a) * x.norm();
  };

  double r_max = q.s_max > 0.0 ? q.s_max * t_rho : 0.0;
  if (r_max == 0.0) {
    r_max = 1.0;
    while (front * tail_bound(r_max) > 1e-3 * target && r_max < 1e8) r_max *= 1.25;
  } else if (front * tail_bound(r_max) > target) {
    throw TailToleranceUnreachable("wright_inverse_rof: truncation at s_max leaves a tail above "
                                   "tail_tolerance",
                                   -decay.rate);
  }

  const quad::GaussRule rule = quad::gauss_legendre(q.nodes_per_oscillation);
  Vec integral = Vec::Zero(n);
  double error = 0.0, scale = 0.0;
  res.used.split_points.clear();
  double a = 0.0;
  double b = std::min(1.0, r_max);
  res.used.split_points.push_back(0.0);
  while (a < r_max) {
    Piece piece = integrate_panel(f, a, b, rule, q.panel_tolerance, scale);
    integral += piece.value;
    error += piece.error;
    scale = std::max(scale, integral.norm());
    res.used.split_points.push_back(b / t_rho);
    a = b;
    b = std::min(2.0 * b, r_max);
  }
  error += tail_bound(r_max);
  res.used.s_max = r_max / t_rho;
  res.value = x - front * integral;
  res.error = front * error;
  return res;
}

TransformResult analytic_inverse_rof(const ROFFamily& fam, const Vec& x, double t,
                                     const QuadratureSpec& q) {
  q.validate();
  const auto& p = fam.params();
  if (!(t > 0.0)) throw DomainError("analytic_inverse_rof: t must be positive");
  if (p.beta != 0.0 || !(p.alpha < 2.0))
    throw HypothesisViolation("analytic_inverse_rof: needs an alpha-resolvent family, alpha < 2");
  // Analytic alpha-resolvent families need -A sectorial of angle pi - alpha pi/2,
  // so every eigenvalue must satisfy |arg lambda| > alpha pi / 2.
  const auto& eig = fam.generator().eigenvalues();
  for (Eigen::Index k = 0; k < eig.size(); ++k)
    if (!(std::abs(std::arg(eig(k))) > 0.5 * p.alpha * pi + 1e-12))
      throw HypothesisViolation("analytic_inverse_rof: generator is not of analytic type");
  require_tempered(fam);
  const Eigen::Index n = fam.generator().dim();

  TransformResult res;
  res.used = q;
  if (x.norm() == 0.0) {
    res.value = Vec::Zero(n);
    return res;
  }
  // u = 2 sqrt(s t), ds = u/(2t) du.
  auto f = [&](double u) -> Vec {
    const double s = u * u / (4.0 * t);
    const Vec d = rof_derivative_apply(fam, s, x) - rof_apply(fam, s, x) / s;
    return (bessel_j(BesselOrder(2.0), u) * u / (2.0 * t)) * d;
  };
  BesselZeros zeros(2.0);
  const double U = q.s_max > 0.0 ? 2.0 * std::sqrt(q.s_max * t) : INFINITY;
  Oscillatory body = integrate_zero_panels(f, zeros, 0.0, U, q, n);
  res.used.split_points.clear();
  for (double u : body.splits) res.used.split_points.push_back(u * u / (4.0 * t));
  res.value = x + body.value;
  res.error = body.error;
  return res;
}

TrajectoryResult inverse_rof_trajectory(const ROFFamily& fam, const InverseTransformSpec& spec,
                                        const Vec& x, std::span<const double> grid,
                                        const QuadratureSpec& q, int interpolation_order) {
  if (spec.source.alpha != fam.params().alpha || spec.source.beta != fam.params().beta)
    throw DomainError("inverse_rof_trajectory: spec does not match the family orders");
  // The temperedness probe is shared by every grid point.
  ROFFamily shared = fam;
  if (!shared.tempered_bound()) shared.set_tempered_bound(require_tempered(fam));

  TrajectoryResult out;
  std::vector<Eigen::MatrixXcd> values;
  for (double t : grid) {
    TransformResult r;
    if (t == 0.0) {
      r.value = spec.kind == TransformKind::bessel_integrated ? Vec::Zero(x.size()) : x;
    } else {
      switch (spec.kind) {
        case TransformKind::bessel_integrated:
          r = bessel_inverse_rof(shared, spec.target_gamma, x, t, q);
          break;
        case TransformKind::wright_subordinated:
          r = wright_inverse_rof(shared, spec.target_gamma, x, t, q);
          break;
        case TransformKind::analytic_derivative:
          r = analytic_inverse_rof(shared, x, t, q);
          break;
      }
    }
    values.emplace_back(r.value);
    out.errors.push_back(r.error);
    out.max_error = std::max(out.max_error, r.error);
  }
  out.trajectory = Trajectory(std::vector<double>(grid.begin(), grid.end()), std::move(values),
                              interpolation_order);
  return out;
}

}  // namespace invrof
