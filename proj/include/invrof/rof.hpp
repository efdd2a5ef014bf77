#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "invrof/fraccalc.hpp"
#include "invrof/generator.hpp"

namespace invrof {

struct ROFParams {
  double alpha;
  double beta;

  ROFParams(double alpha, double beta);
};

enum class Backend {
  automatic,          // spectral evaluation (diagonal or Schur-Parlett)
  ml_series,          // norm-scaled Mittag-Leffler power series
  laplace_inversion,  // Bromwich inversion on a parabolic contour
};

// Resolvent family R(t) = t^beta E_{alpha,beta+1}(t^alpha A), whose Laplace
// transform is lambda^(alpha-beta-1) (lambda^alpha - A)^{-1}.
class ROFFamily {
 public:
  ROFFamily(GeneratorMatrix generator, ROFParams params, Backend backend = Backend::automatic);

  const GeneratorMatrix& generator() const { return generator_; }
  const ROFParams& params() const { return params_; }
  Backend backend() const { return backend_; }

  std::optional<double> tempered_bound() const { return tempered_bound_; }
  // Write-once; later calls are ignored.
  void set_tempered_bound(double M);

  // Same generator, different orders.
  ROFFamily with_params(ROFParams params) const;

 private:
  GeneratorMatrix generator_;
  ROFParams params_;
  Backend backend_;
  std::optional<double> tempered_bound_;
};

Eigen::MatrixXcd rof_eval(const ROFFamily& fam, double t);
Eigen::MatrixXcd rof_eval(const ROFFamily& fam, double t, Backend backend);

// R(t) x without forming R(t) when the generator is normal.
Eigen::VectorXcd rof_apply(const ROFFamily& fam, double t, const Eigen::VectorXcd& x);

// d/dt R(t) = t^(beta-1) E_{alpha,beta}(t^alpha A) for t > 0.
Eigen::VectorXcd rof_derivative_apply(const ROFFamily& fam, double t, const Eigen::VectorXcd& x);

// Samples t -> R(t) x on the grid.
Trajectory sample_family(const ROFFamily& fam, std::span<const double> grid,
                         const Eigen::VectorXcd& x, int interpolation_order = 4);

// Exponents beta + k alpha of the small-t expansion of R(t) x.
StartingTerms family_starting_terms(const ROFParams& params, int count = 6);

// R_{alpha,delta} from a sampled R_{alpha,beta} by a Caputo derivative of
// order beta - delta. Throws InitialConditionViolation when the sampled
// family does not vanish to the required order at 0.
Trajectory deintegrate(const ROFFamily& fam, std::span<const double> grid, double delta,
                       const Eigen::VectorXcd& x, int interpolation_order = 4);

struct TemperedFit {
  double bound = 0.0;           // max ||R(t)|| / t^beta over the grid
  bool unbounded_growth = false;
};

// Fits M in ||R(t)|| <= M t^beta and stores it in the family when the ratio
// stays bounded.
TemperedFit fit_tempered_bound(ROFFamily& fam, std::span<const double> grid);

// Default temperedness probe on a log grid over [1e-3, 1e3].
TemperedFit probe_tempered(const ROFFamily& fam);

}  // namespace invrof
