#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "invrof/fraccalc.hpp"
#include "invrof/rof.hpp"

namespace invrof {

struct QuadratureSpec {
  // Truncation of the semi-infinite integral in the s variable. Zero selects
  // the automatic tail treatment (extrapolation or integration by parts).
  double s_max = 0.0;
  int nodes_per_oscillation = 16;  // Gauss-Legendre order on each panel, >= 8
  double tail_tolerance = 1e-10;   // relative to the scale of the result
  double panel_tolerance = 1e-12;  // relative accuracy asked of each panel
  std::vector<double> split_points;  // filled with the panel breakpoints used

  void validate() const;
};

enum class TransformKind { bessel_integrated, wright_subordinated, analytic_derivative };

struct InverseTransformSpec {
  ROFParams source;
  double target_gamma;
  TransformKind kind;

  // Checks the order constraints of the chosen representation:
  // bessel_integrated needs target_gamma > beta + 1/2, wright_subordinated
  // needs 0 < target_gamma < alpha, analytic_derivative needs beta = 0 and
  // target_gamma = 0.
  InverseTransformSpec(ROFParams source, double target_gamma, TransformKind kind);
};

struct TransformResult {
  Eigen::VectorXcd value;
  double error = 0.0;
  QuadratureSpec used;
};

// The (alpha, gamma) family of A^{-1} applied to x at time t, from the
// (alpha, beta) family of A through the Bessel kernel
//   t^gamma x / Gamma(gamma+1) - t^{nu/2} int_0^inf J_nu(2 sqrt(st)) s^{-nu/2} R(s) x ds,
// nu = 1 + beta + gamma. Requires gamma >= beta + 0.55 by default.
TransformResult bessel_inverse_rof(const ROFFamily& fam, double gamma, const Eigen::VectorXcd& x,
                                   double t, const QuadratureSpec& q = {});

// The gamma-resolvent family of A^{-1} by Wright subordination
//   x - t^{rho(1+beta)} int_0^inf phi(rho, 1 + rho(1+beta); -s t^rho) R(s) x ds,
// rho = gamma/alpha, 0 < gamma < alpha.
TransformResult wright_inverse_rof(const ROFFamily& fam, double gamma, const Eigen::VectorXcd& x,
                                   double t, const QuadratureSpec& q = {});

// The alpha-resolvent family of A^{-1} for an analytic alpha-resolvent family
// of A:  x + int_0^inf J_2(2 sqrt(st)) (R'(s) - R(s)/s) x ds.
TransformResult analytic_inverse_rof(const ROFFamily& fam, const Eigen::VectorXcd& x, double t,
                                     const QuadratureSpec& q = {});

struct TrajectoryResult {
  Trajectory trajectory;
  std::vector<double> errors;
  double max_error = 0.0;
};

TrajectoryResult inverse_rof_trajectory(const ROFFamily& fam, const InverseTransformSpec& spec,
                                        const Eigen::VectorXcd& x, std::span<const double> grid,
                                        const QuadratureSpec& q = {},
                                        int interpolation_order = 4);

// Constants with |phi(rho, mu; -r)| <= scale * exp(-rate * r^(1/(1+rho))),
// fitted from samples.
struct WrightDecay {
  double rate;
  double scale;
};
WrightDecay fit_wright_decay(double rho, double mu);

// Checks that the hypotheses of the transforms hold for this family:
// injective generator and a bounded tempered ratio. Returns the bound M.
double require_tempered(const ROFFamily& fam);

}  // namespace invrof
