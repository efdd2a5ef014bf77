#include "invrof/matfun.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace invrof {
namespace {

// Taylor expansion of f about the mean eigenvalue of a clustered block.
// Plugs into Eigen's Schur-Parlett driver in place of its function-pointer
// atomic, so that the derivative source can carry state.
class TaylorAtomic {
 public:
  explicit TaylorAtomic(const ScalarDerivatives& f) : f_(f) {}

  Eigen::MatrixXcd compute(const Eigen::MatrixXcd& T) const {
    const Eigen::Index n = T.rows();
    const std::complex<double> sigma = T.trace() / double(n);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd N = T - sigma * I;
    Eigen::MatrixXcd F = f_(sigma, 0) * I;
    if (n == 1) return F;
    Eigen::MatrixXcd P = I;
    const int max_order = int(n) + 40;
    int quiet = 0;
    for (int k = 1; k <= max_order; ++k) {
      P = (P * N) / double(k);
      const double pn = P.norm();
      if (pn == 0.0) break;
      const Eigen::MatrixXcd term = f_(sigma, k) * P;
      F += term;
      if (k >= n && term.norm() <= std::numeric_limits<double>::epsilon() * F.norm()) {
        if (++quiet >= 2) break;
      } else {
        quiet = 0;
      }
    }
    return F;
  }

 private:
  const ScalarDerivatives& f_;
};

}  // namespace

double spectral_norm(const Eigen::MatrixXcd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd schur_matrix_function(const Eigen::MatrixXcd& A, const ScalarDerivatives& f) {
  const Eigen::Index n = A.rows();
  if (n == 1) return Eigen::MatrixXcd::Constant(1, 1, f(A(0, 0), 0));

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A);
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& U = schur.matrixU();
  const double scale = std::max(T.norm(), std::numeric_limits<double>::min());
  const double off = T.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  if (off <= 1e-13 * scale) {
    Eigen::VectorXcd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = f(T(i, i), 0);
    return U * d.asDiagonal() * U.adjoint();
  }

  TaylorAtomic atomic(f);
  Eigen::MatrixXcd result;
  Eigen::internal::matrix_function_compute<Eigen::MatrixXcd>::run(A, atomic, result);
  return result;
}

}  // namespace invrof
