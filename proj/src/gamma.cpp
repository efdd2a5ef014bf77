#include <cmath>
#include <numbers>

#include "invrof/error.hpp"
#include "invrof/specfun.hpp"

namespace invrof {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double lanczos_g = 7.0;
constexpr double lanczos_coef[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx lanczos_sum(cplx zm1) {
  cplx x = lanczos_coef[0];
  for (int i = 1; i < 9; ++i) x += lanczos_coef[i] / (zm1 + double(i));
  return x;
}

}  // namespace

cplx gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("gamma: pole at nonpositive integer");
  if (z.imag() == 0.0 && z.real() > 0.0) return std::tgamma(z.real());
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
  const cplx zm1 = z - 1.0;
  const cplx t = zm1 + lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, zm1 + 0.5) * std::exp(-t) * lanczos_sum(zm1);
}

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (z.imag() == 0.0 && z.real() > 0.0) return std::lgamma(z.real());
  if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  const cplx zm1 = z - 1.0;
  const cplx t = zm1 + lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(zm1));
}

double rgamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (x > 170.0) return std::exp(-std::lgamma(x));
  return 1.0 / std::tgamma(x);
}

cplx rgamma(cplx z) {
  if (z.imag() == 0.0) return rgamma(z.real());
  return std::exp(-log_gamma(z));
}

double g_kernel(double alpha, double t) {
  if (alpha < 0.0) throw DomainError("g_kernel: negative order");
  if (alpha == 0.0) throw DomainError("g_kernel: g_0 is the Dirac delta; use the convolution identity");
  if (t <= 0.0) return 0.0;
  if (alpha < 170.0) return std::pow(t, alpha - 1.0) * rgamma(alpha);
  return std::exp((alpha - 1.0) * std::log(t) - std::lgamma(alpha));
}

}  // namespace invrof
