#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace invrof {

// Scalar analytic function given through its derivatives: f(z, n) = f^(n)(z).
using ScalarDerivatives = std::function<std::complex<double>(std::complex<double>, int)>;

// f(A) by Schur-Parlett. Normal matrices reduce to the diagonal of the Schur
// form; otherwise clustered blocks are expanded in Taylor series about the
// cluster mean and coupled through Sylvester equations.
Eigen::MatrixXcd schur_matrix_function(const Eigen::MatrixXcd& A, const ScalarDerivatives& f);

// Spectral norm (largest singular value).
double spectral_norm(const Eigen::MatrixXcd& A);

}  // namespace invrof
