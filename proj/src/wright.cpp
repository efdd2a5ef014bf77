#include <cmath>
#include <limits>
#include <numbers>

#include "compensated.hpp"
#include "invrof/error.hpp"
#include "invrof/quadrature.hpp"
#include "invrof/specfun.hpp"

namespace invrof {
namespace {

constexpr double pi = std::numbers::pi;

struct SeriesOutcome {
  cplx value;
  double max_term = 0.0;
  bool converged = false;
};

SeriesOutcome wright_series(double rho, cplx mu, cplx z) {
  detail::CompensatedSum sum;
  const double abs_z = std::abs(z);
  const cplx unit = z / abs_z;
  const double log_z = std::log(abs_z);
  const bool real_mu = mu.imag() == 0.0;
  cplx phase = 1.0;
  SeriesOutcome out;
  double prev_log = -std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (int k = 0; k < 4000; ++k) {
    const double log_zk = k * log_z - std::lgamma(k + 1.0);
    cplx rg;
    if (real_mu) {
      rg = rgamma(rho * k + mu.real());
    } else {
      rg = rgamma(rho * k + mu);
    }
    const cplx term = rg == cplx(0.0) ? cplx(0.0) : std::exp(log_zk) * rg * phase;
    const double log_mag = rg == cplx(0.0) ? prev_log : log_zk + std::log(std::abs(rg));
    sum.add(term);
    out.max_term = std::max(out.max_term, std::abs(term));
    phase *= unit;
    if (k > 0 && log_mag < prev_log && std::abs(term) <= 1e-18 * std::abs(sum.value())) {
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

// phi(rho, mu; -r) from the Hankel-loop representation
// (1/2 pi i) int e^(tau - r tau^-rho) tau^-mu d tau, deformed onto the rays
// through the saddle point at arg tau = pi/(1+rho). Along that ray the
// modulus peaks at the saddle, so the quadrature keeps relative accuracy.
double wright_negative_axis(double rho, double mu, double r) {
  const double theta = pi / (1.0 + rho);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double crt = std::cos(rho * theta), srt = std::sin(rho * theta);
  const double saddle = std::pow(rho * r, 1.0 / (1.0 + rho));
  auto integrand = [&](double x) -> cplx {
    const double xr = r * std::pow(x, -rho);
    const double log_mag = x * ct - xr * crt - mu * std::log(x);
    if (log_mag < -745.0) return 0.0;
    const double phase = x * st + xr * srt - mu * theta + theta;
    return std::exp(cplx(log_mag, phase));
  };
  const auto est = quad::integrate_exp_sinh(integrand, std::max(saddle, 0.5), 1e-15, 11);
  return est.value.imag() / pi;
}

}  // namespace

WrightParams::WrightParams(double rho_, cplx mu_) : rho(rho_), mu(mu_) {
  if (!(rho > -1.0)) throw DomainError("WrightParams: rho must exceed -1");
}

cplx wright(const WrightParams& p, cplx z) {
  if (!(p.rho > 0.0 && p.rho <= 1.0))
    throw DomainError("wright: evaluation is supported for 0 < rho <= 1");
  if (z == cplx(0.0)) return rgamma(p.mu);

  const SeriesOutcome s = wright_series(p.rho, p.mu, z);
  if (s.converged && s.max_term <= 1e4 * std::max(std::abs(s.value), 1e-300)) return s.value;

  const bool negative_axis = z.real() < 0.0 && std::abs(z.imag()) <= 1e-14 * std::abs(z);
  if (negative_axis && p.mu.imag() == 0.0) {
    const double r = -z.real();
    const double mu = p.mu.real();
    if (p.rho < 1.0) return wright_negative_axis(p.rho, mu, r);
    if (mu >= 1.0) return std::pow(r, -(mu - 1.0) / 2.0) * bessel_j(BesselOrder(mu - 1.0), 2.0 * std::sqrt(r));
  }
  throw PrecisionLoss(
      "wright: series cancellation exceeds budget; use the exponential decay bound for large "
      "negative arguments");
}

}  // namespace invrof
