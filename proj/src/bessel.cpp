#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "invrof/error.hpp"
#include "invrof/specfun.hpp"

namespace invrof {
namespace {

constexpr double pi = std::numbers::pi;

double series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion; empty when the asymptotic terms stop decreasing before
// reaching double precision.
std::optional<double> asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  bool ok = false;
  for (int k = 1; k < 200; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    // Terms alternate between Q and P with signs (+,-,-,+) in period four.
    const int r = k % 4;
    const double signed_term = (r == 1 || r == 0) ? term : -term;
    if (k % 2 == 1)
      q += signed_term;
    else
      p += signed_term;
    if (mag < 1e-17) {
      ok = true;
      break;
    }
  }
  if (!ok) return std::nullopt;
  const double phase = (0.5 * nu + 0.25) * pi;
  const double c = std::cos(x) * std::cos(phase) + std::sin(x) * std::sin(phase);
  const double s = std::sin(x) * std::cos(phase) - std::cos(x) * std::sin(phase);
  return std::sqrt(2.0 / (pi * x)) * (p * c - q * s);
}

// Miller backward recurrence normalised with
// (x/2)^f = sum_k (f + 2k) Gamma(f + k)/k! J_{f+2k}(x), f = frac(nu).
BesselPair miller(double nu, double x) {
  const int n0 = int(std::floor(nu));
  const double frac = nu - n0;
  const double top = std::max(x, nu);
  int start = int(top) + 60 + int(20.0 * std::cbrt(top));
  if (start % 2) ++start;

  std::vector<double> weight(start / 2 + 2);
  weight[0] = std::tgamma(frac + 1.0);
  double ratio = std::tgamma(frac + 1.0);  // Gamma(f + k)/k! at k = 1
  for (std::size_t k = 1; k < weight.size(); ++k) {
    weight[k] = (frac + 2.0 * k) * ratio;
    ratio *= (frac + k) / (k + 1.0);
  }

  double next = 0.0, cur = 1e-280;
  double norm = 0.0, j_nu = 0.0, j_nu1 = 0.0;
  for (int m = start; m >= 0; --m) {
    if (m == n0) j_nu = cur;
    if (m == n0 + 1) j_nu1 = cur;
    if (m % 2 == 0) norm += weight[m / 2] * cur;
    if (m == 0) break;
    const double prev = 2.0 * (m + frac) / x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      j_nu *= 1e-250;
      j_nu1 *= 1e-250;
    }
  }
  const double scale = std::pow(0.5 * x, frac) / norm;
  return {j_nu * scale, j_nu1 * scale};
}

double evaluate(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= 5.0 || x < 1e-3 * nu) return series(nu, x);
  if (x >= 25.0) {
    if (auto a = asymptotic(nu, x)) return *a;
  }
  return miller(nu, x).j;
}

}  // namespace

BesselOrder::BesselOrder(double nu_) : nu(nu_) {
  if (!(nu >= 0.0)) throw DomainError("BesselOrder: order must be nonnegative");
}

double bessel_j(BesselOrder order, double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be nonnegative");
  return evaluate(order.nu, x);
}

BesselPair bessel_j_pair(double nu, double x) {
  if (!(x >= 0.0) || !(nu >= 0.0)) throw DomainError("bessel_j_pair: invalid argument");
  if (x <= 5.0 || x >= 25.0) return {evaluate(nu, x), evaluate(nu + 1.0, x)};
  return miller(nu, x);
}

BesselZeros::BesselZeros(double nu) : nu_(nu) {
  if (!(nu >= 0.0)) throw DomainError("BesselZeros: order must be nonnegative");
}

double BesselZeros::refine(double lo, double hi) const {
  double flo = evaluate(nu_, lo);
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const BesselPair jp = bessel_j_pair(nu_, x);
    if ((jp.j < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = jp.j;
    } else {
      hi = x;
    }
    const double deriv = nu_ / x * jp.j - jp.j_next;
    double step = deriv != 0.0 ? jp.j / deriv : 0.0;
    double nx = x - step;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 4e-16 * x || hi - lo <= 4e-16 * x) return nx;
    x = nx;
  }
  return x;
}

double BesselZeros::operator[](std::size_t k) {
  while (zeros_.size() <= k) {
    // Consecutive zeros are at least ~2.9 apart; scan with a finer step.
    double lo = zeros_.empty() ? std::max(nu_, 1.0) : zeros_.back() + 1.0;
    double flo = evaluate(nu_, lo);
    if (zeros_.empty() && flo <= 0.0) {
      lo = 1e-3;
      flo = evaluate(nu_, lo);
    }
    double hi = lo;
    for (;;) {
      hi = lo + 0.4;
      const double fhi = evaluate(nu_, hi);
      if ((fhi < 0.0) != (flo < 0.0) || fhi == 0.0) break;
      lo = hi;
      flo = fhi;
    }
    zeros_.push_back(refine(lo, hi));
  }
  return zeros_[k];
}

}  // namespace invrof
