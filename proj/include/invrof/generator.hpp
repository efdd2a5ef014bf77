#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace invrof {

// Dense square generator with cached spectral data.
class GeneratorMatrix {
 public:
  explicit GeneratorMatrix(Eigen::MatrixXcd entries, double rank_tolerance = 1e-10);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  // Smallest singular value above rank_tolerance times the largest.
  bool injective() const { return injective_; }
  double norm() const { return sigma_max_; }
  double smallest_singular_value() const { return sigma_min_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }

  // Schur form A = Q T Q^*; normal() when T is diagonal to rounding.
  const Eigen::MatrixXcd& schur_basis() const { return schur_q_; }
  const Eigen::MatrixXcd& schur_triangle() const { return schur_t_; }
  bool normal() const { return normal_; }

  // Throws HypothesisViolation when the matrix is not injective.
  GeneratorMatrix inverse() const;
  const Eigen::MatrixXcd& inverse_entries() const;

 private:
  Eigen::MatrixXcd entries_;
  Eigen::MatrixXcd inverse_;
  Eigen::VectorXcd eigenvalues_;
  Eigen::MatrixXcd schur_q_, schur_t_;
  double sigma_max_ = 0.0, sigma_min_ = 0.0;
  bool injective_ = false;
  bool normal_ = false;
};

GeneratorMatrix diag_generator(std::span<const std::complex<double>> diagonal);
GeneratorMatrix jordan_generator(std::complex<double> eigenvalue, int size);

// Second-difference matrix tridiag(1, -2, 1)/h^2 with Dirichlet boundaries,
// minus shift * I.
GeneratorMatrix laplacian_1d(int n, double h, double shift = 0.0);

// Builder strings:
//   diag:<c1>,<c2>,...          complex entries as 2, -1.5, 3+2i, -0.5i
//   jordan:<eigenvalue>:<size>
//   laplacian_1d:<n>[:<h>[:<shift>]]
// Anything else is treated as a path to a matrix file.
GeneratorMatrix parse_generator(std::string_view spec);

// Matrix file: first line n, then n lines each holding n pairs "re im".
GeneratorMatrix load_generator_file(const std::filesystem::path& path);

// (z I - A)^{-1} by LU; throws NearSpectrum when the residual check fails.
Eigen::MatrixXcd resolvent(const GeneratorMatrix& A, std::complex<double> z);

}  // namespace invrof
