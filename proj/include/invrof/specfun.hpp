#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace invrof {

using cplx = std::complex<double>;

struct MLParams {
  double alpha;
  double beta;

  MLParams(double alpha, double beta);
};

struct WrightParams {
  double rho;
  cplx mu;

  WrightParams(double rho, cplx mu);
};

struct BesselOrder {
  double nu;

  explicit BesselOrder(double nu);
};

// Gamma function on the complex plane (Lanczos with reflection).
// Throws PoleError at nonpositive integers.
cplx gamma(cplx z);

// log Gamma(z) up to a multiple of 2*pi*i; only suitable for exponentiation.
cplx log_gamma(cplx z);

// 1/Gamma(x) for real x; zero at the poles.
double rgamma(double x);
cplx rgamma(cplx z);

// g_alpha(t) = t^(alpha-1)/Gamma(alpha) for t > 0, 0 otherwise.
// alpha = 0 is the Dirac delta and raises DomainError.
double g_kernel(double alpha, double t);

cplx mittag_leffler(const MLParams& p, cplx z);

// n-th derivative in z of E_{alpha,beta}. Unlike MLParams, beta may be any
// real number here (E_{alpha,0} appears in derivatives of resolvent families).
cplx mittag_leffler_derivative(double alpha, double beta, cplx z, int order);

enum class MatrixMethod { automatic, series, schur };

// E_{alpha,beta}(arg*M). The series method sums the power series with norm
// scaling and works for any square M including Jordan blocks; the Schur
// method applies the scalar function through a Schur-Parlett evaluation.
Eigen::MatrixXcd mittag_leffler_matrix(const MLParams& p, const Eigen::MatrixXcd& M,
                                       cplx arg,
                                       MatrixMethod method = MatrixMethod::automatic);

// Generalised variant accepting any real beta and returning the requested
// derivative order of the scalar function applied to arg*M.
Eigen::MatrixXcd mittag_leffler_matrix_derivative(double alpha, double beta,
                                                  const Eigen::MatrixXcd& M, cplx arg,
                                                  int order,
                                                  MatrixMethod method = MatrixMethod::automatic);

// Wright function phi(rho, mu; z) = sum z^k / (k! Gamma(rho k + mu)).
cplx wright(const WrightParams& p, cplx z);

double bessel_j(BesselOrder order, double x);

// J_nu(x) and J_{nu+1}(x) together (the pair needed for derivatives).
struct BesselPair {
  double j;
  double j_next;
};
BesselPair bessel_j_pair(double nu, double x);

// Successive positive zeros of J_nu, generated on demand.
class BesselZeros {
 public:
  explicit BesselZeros(double nu);
  double operator[](std::size_t k);  // k = 0 is the first positive zero
  double order() const { return nu_; }

 private:
  double nu_;
  std::vector<double> zeros_;
  double refine(double lo, double hi) const;
};

}  // namespace invrof
