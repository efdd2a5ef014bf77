#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "compensated.hpp"
#include "invrof/error.hpp"
#include "invrof/matfun.hpp"
#include "invrof/quadrature.hpp"
#include "invrof/specfun.hpp"

namespace invrof {
namespace {

constexpr double pi = std::numbers::pi;
constexpr int series_budget = 3000;
constexpr double series_radius = 5.0;
constexpr double max_cancellation = 1e4;

double log_factorial_ratio(int k, int n) {  // log(k!/(k-n)!)
  return std::lgamma(k + 1.0) - std::lgamma(k - n + 1.0);
}

struct SeriesOutcome {
  cplx value;
  double max_term = 0.0;
  bool converged = false;
};

// Term-wise n-th derivative of sum z^k / Gamma(alpha k + beta).
SeriesOutcome ml_series(double alpha, double beta, cplx z, int n) {
  detail::CompensatedSum sum;
  const double abs_z = std::abs(z);
  const cplx unit = abs_z > 0.0 ? z / abs_z : cplx(1.0);
  const double log_z = std::log(abs_z);
  cplx phase = 1.0;
  SeriesOutcome out;
  double prev_log = -std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (int k = n; k < n + series_budget; ++k) {
    const int j = k - n;
    const double arg = alpha * k + beta;
    double log_mag;
    double sign = 1.0;
    if (arg > 0.0) {
      log_mag = -std::lgamma(arg);
    } else {
      const double rg = rgamma(arg);
      if (rg == 0.0) {
        phase *= unit;
        continue;
      }
      sign = rg < 0.0 ? -1.0 : 1.0;
      log_mag = std::log(std::abs(rg));
    }
    log_mag += log_factorial_ratio(k, n) + (j > 0 ? j * log_z : 0.0);
    const cplx term = sign * std::exp(log_mag) * phase;
    sum.add(term);
    out.max_term = std::max(out.max_term, std::abs(term));
    if (abs_z == 0.0) {
      out.value = sum.value();
      out.converged = true;
      return out;
    }
    phase *= unit;
    const double s = std::abs(sum.value());
    if (j > 0 && log_mag < prev_log && std::abs(term) <= 1e-18 * s) {
      if (++quiet >= 3) {
        out.value = sum.value();
        out.converged = true;
        return out;
      }
    } else {
      quiet = 0;
    }
    prev_log = log_mag;
  }
  out.value = sum.value();
  return out;
}

// Poles of s -> 1/(s^alpha - z) on the closed principal sheet. Those on the
// cut only matter for choosing the ray angle.
std::vector<cplx> principal_poles(double alpha, cplx z) {
  std::vector<cplx> poles;
  const double radius = std::pow(std::abs(z), 1.0 / alpha);
  const double a = std::arg(z);
  const int kmax = int(std::ceil(alpha)) + 1;
  for (int k = -kmax; k <= kmax; ++k) {
    const double ang = (a + 2.0 * pi * k) / alpha;
    if (std::abs(ang) <= pi * (1.0 + 1e-12)) poles.push_back(std::polar(radius, ang));
  }
  return poles;
}

double choose_ray_angle(const std::vector<cplx>& poles) {
  auto clearance = [&](double theta) {
    double d = std::numeric_limits<double>::infinity();
    for (const cplx& p : poles) d = std::min(d, std::abs(std::abs(std::arg(p)) - theta));
    return d;
  };
  if (clearance(pi) >= 0.2 * pi) return pi;
  double best = pi, best_clear = clearance(pi);
  for (double frac : {0.9, 0.8, 0.7, 0.6}) {
    const double c = clearance(frac * pi);
    if (c > best_clear + 1e-12) {
      best = frac * pi;
      best_clear = c;
    }
  }
  return best;
}

// n-th z-derivative of the residue term h(s(z)) = s^(1-beta) e^s / alpha at a
// pole s = z^(1/alpha), using d/dz = s^(1-alpha)/alpha d/ds.
cplx residue_derivative(double alpha, double beta, cplx s, int n) {
  std::vector<double> c{1.0 / alpha};
  for (int step = 0; step < n; ++step) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double p = 1.0 - beta + step * (1.0 - alpha) - double(j);
      next[j] += c[j] / alpha;
      next[j + 1] += p * c[j] / alpha;
    }
    c = std::move(next);
  }
  const double log_r = std::log(std::abs(s));
  const double ang = std::arg(s);
  cplx total = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    const double p = 1.0 - beta + n * (1.0 - alpha) - double(j);
    total += c[j] * std::exp(cplx(p * log_r + s.real(), p * ang + s.imag()));
  }
  return total;
}

cplx ml_eval(double alpha, double beta, cplx z, int n);

// Integral representation over the rays arg s = +-theta plus residues of the
// poles enclosed between them. Requires beta < alpha + 1 and z != 0.
cplx ml_contour(double alpha, double beta, cplx z, int n) {
  const std::vector<cplx> poles = principal_poles(alpha, z);
  const double theta = choose_ray_angle(poles);
  const double cos_t = std::cos(theta);
  const double radius = std::pow(std::abs(z), 1.0 / alpha);

  // Peel off leading asymptotic terms when the pole radius lies far beyond
  // the effective support of e^s on the rays.
  const int peel = (n == 0 && radius * std::abs(cos_t) >= 40.0) ? 4 : 0;
  const double p = alpha - beta + peel * alpha;

  auto ray = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const cplx rot_alpha = std::polar(1.0, alpha * th);
    auto integrand = [&](double r) -> cplx {
      const cplx den = std::pow(r, alpha) * rot_alpha - z;
      const double log_mag = r * c + p * std::log(r) - (n + 1) * std::log(std::abs(den));
      if (log_mag < -745.0) return 0.0;
      const double phase = r * s + p * th + th - (n + 1) * std::arg(den);
      return std::exp(cplx(log_mag, phase));
    };
    return quad::integrate_exp_sinh(integrand, 1.0 / std::abs(c), 1e-15).value;
  };
  const cplx upper = ray(theta);
  const cplx lower = ray(-theta);
  cplx value = std::exp(std::lgamma(n + 1.0)) * (upper - lower) / cplx(0.0, 2.0 * pi);
  if (peel > 0) {
    value /= std::pow(z, peel);
    for (int k = 1; k <= peel; ++k) value -= std::pow(z, -k) * rgamma(beta - alpha * k);
  }
  for (const cplx& s : poles)
    if (std::abs(std::arg(s)) < theta) value += residue_derivative(alpha, beta, s, n);
  return value;
}

// Large-|z| expansion: residues of the principal poles plus
// -sum_k z^-k / Gamma(beta - alpha k), truncated once the terms fall below
// rounding. Empty when a pole near the cut carries a non-negligible
// exponential or the algebraic terms stop decreasing first.
std::optional<cplx> ml_asymptotic(double alpha, double beta, cplx z, int n) {
  if (alpha >= 2.0) return std::nullopt;
  cplx exponential = 0.0;
  double near_cut = 0.0;
  for (const cplx& s : principal_poles(alpha, z)) {
    const double ang = std::abs(std::arg(s));
    if (ang > 0.75 * pi)
      near_cut = std::max(near_cut, std::abs(residue_derivative(alpha, beta, s, n)));
    else
      exponential += residue_derivative(alpha, beta, s, n);
  }
  detail::CompensatedSum algebraic;
  double prev = std::numeric_limits<double>::infinity();
  const double log_z = std::log(std::abs(z));
  const double arg_z = std::arg(z);
  for (int k = 1; k < 200; ++k) {
    const double rg = rgamma(beta - alpha * k);
    // d^n/dz^n z^-k = (-1)^n k (k+1) ... (k+n-1) z^-(k+n).
    const double log_rising = std::lgamma(k + n) - std::lgamma(k);
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;
    const double log_mag = log_rising - (k + n) * log_z;
    const cplx term = rg == 0.0 ? cplx(0.0)
                                : sign * rg * std::exp(cplx(log_mag, -(k + n) * arg_z));
    const double mag = rg == 0.0 ? 0.0 : std::abs(rg) * std::exp(log_mag);
    if (mag > prev && mag > 0.0) return std::nullopt;
    algebraic.add(term);
    if (mag > 0.0) prev = mag;
    if (mag == 0.0) continue;
    const double total = std::abs(algebraic.value() + exponential);
    if (k > 2 && mag <= 1e-17 * total) {
      if (near_cut > 1e-17 * total) return std::nullopt;
      return algebraic.value() + exponential;
    }
  }
  return std::nullopt;
}

// E_b = (E_{b-alpha} - 1/Gamma(b-alpha)) / z, differentiated n times.
cplx ml_reduced(double alpha, double beta, cplx z, int n) {
  const double b = beta - alpha;
  cplx total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    cplx g = ml_eval(alpha, b, z, j);
    if (j == 0) g -= rgamma(b);
    const int m = n - j;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    total += binom * g * sign * std::exp(std::lgamma(m + 1.0)) / std::pow(z, m + 1);
    binom = binom * (n - j) / (j + 1);
  }
  return total;
}

// E_{1,b}(z) = z^(1-b) e^z for integer b <= 1. These are exponentially small
// on the negative axis, below the absolute accuracy of the ray integral.
cplx ml_exponential(double beta, cplx z, int n) {
  const int m = int(1.0 - beta);
  cplx total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= std::min(n, m); ++j) {
    const double falling = std::exp(std::lgamma(m + 1.0) - std::lgamma(m - j + 1.0));
    total += binom * falling * std::pow(z, m - j);
    binom = binom * (n - j) / (j + 1);
  }
  return total * std::exp(z);
}

cplx ml_eval(double alpha, double beta, cplx z, int n) {
  if (alpha == 1.0 && beta <= 1.0 && beta == std::floor(beta)) return ml_exponential(beta, z, n);
  if (z == cplx(0.0)) return std::exp(std::lgamma(n + 1.0)) * rgamma(alpha * n + beta);
  if (std::abs(z) <= series_radius || z.real() >= 0.0) {
    const SeriesOutcome s = ml_series(alpha, beta, z, n);
    if (s.converged &&
        s.max_term <= max_cancellation * std::max(std::abs(s.value), 1e-300))
      return s.value;
  }
  if (std::abs(z) > series_radius) {
    if (const auto a = ml_asymptotic(alpha, beta, z, n)) return *a;
  }
  if (beta >= alpha + 1.0) return ml_reduced(alpha, beta, z, n);
  return ml_contour(alpha, beta, z, n);
}

}  // namespace

MLParams::MLParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha > 0.0)) throw DomainError("MLParams: alpha must be positive");
  if (!(beta > 0.0)) throw DomainError("MLParams: beta must be positive");
}

cplx mittag_leffler(const MLParams& p, cplx z) { return ml_eval(p.alpha, p.beta, z, 0); }

cplx mittag_leffler_derivative(double alpha, double beta, cplx z, int order) {
  if (!(alpha > 0.0)) throw DomainError("mittag_leffler_derivative: alpha must be positive");
  if (order < 0) throw DomainError("mittag_leffler_derivative: negative order");
  return ml_eval(alpha, beta, z, order);
}

namespace {

Eigen::MatrixXcd ml_matrix_series(double alpha, double beta, const Eigen::MatrixXcd& M,
                                  cplx arg, int n) {
  const Eigen::Index dim = M.rows();
  const Eigen::MatrixXcd X = arg * M;
  const double scale = spectral_norm(X);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);
  if (scale == 0.0) return std::exp(std::lgamma(n + 1.0)) * rgamma(alpha * n + beta) * I;
  const Eigen::MatrixXcd Y = X / scale;
  const double log_scale = std::log(scale);

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd power = I;
  double max_term = 0.0;
  double prev_log = -std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (int k = n; k < n + series_budget; ++k) {
    const int j = k - n;
    const double rg = rgamma(alpha * k + beta);
    if (rg != 0.0) {
      const double log_c = std::log(std::abs(rg)) + log_factorial_ratio(k, n) + j * log_scale;
      const Eigen::MatrixXcd term = (rg < 0.0 ? -1.0 : 1.0) * std::exp(log_c) * power;
      // Kahan step on every entry.
      const Eigen::MatrixXcd y = term - comp;
      const Eigen::MatrixXcd t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      const double tn = term.norm();
      max_term = std::max(max_term, tn);
      if (j > 0 && log_c < prev_log && tn <= 1e-18 * sum.norm()) {
        if (++quiet >= 3) {
          if (max_term > 1e4 * sum.norm())
            throw PrecisionLoss("mittag_leffler_matrix: series cancellation exceeds 4 digits");
          return sum;
        }
      } else {
        quiet = 0;
      }
      prev_log = log_c;
    }
    power = power * Y;
  }
  throw SeriesBudgetExceeded("mittag_leffler_matrix: tail bound not reached within term budget");
}

}  // namespace

Eigen::MatrixXcd mittag_leffler_matrix_derivative(double alpha, double beta,
                                                  const Eigen::MatrixXcd& M, cplx arg,
                                                  int order, MatrixMethod method) {
  if (M.rows() != M.cols()) throw DomainError("mittag_leffler_matrix: matrix must be square");
  if (!(alpha > 0.0)) throw DomainError("mittag_leffler_matrix: alpha must be positive");
  if (method == MatrixMethod::series) return ml_matrix_series(alpha, beta, M, arg, order);
  const Eigen::MatrixXcd X = arg * M;
  ScalarDerivatives f = [&](cplx z, int k) { return ml_eval(alpha, beta, z, order + k); };
  return schur_matrix_function(X, f);
}

Eigen::MatrixXcd mittag_leffler_matrix(const MLParams& p, const Eigen::MatrixXcd& M, cplx arg,
                                       MatrixMethod method) {
  return mittag_leffler_matrix_derivative(p.alpha, p.beta, M, arg, 0, method);
}

}  // namespace invrof
