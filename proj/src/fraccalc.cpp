#include "invrof/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invrof/error.hpp"
#include "invrof/quadrature.hpp"
#include "invrof/specfun.hpp"

namespace invrof {

Trajectory::Trajectory(std::vector<double> grid_, std::vector<Eigen::MatrixXcd> values_,
                       int order)
    : grid(std::move(grid_)), values(std::move(values_)), interpolation_order(order) {
  if (grid.empty() || grid.front() != 0.0) throw DomainError("Trajectory: grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("Trajectory: grid must be strictly increasing");
  if (values.size() != grid.size())
    throw DomainError("Trajectory: values and grid lengths differ");
  for (const auto& v : values)
    if (v.rows() != values.front().rows() || v.cols() != values.front().cols())
      throw DomainError("Trajectory: values must share one shape");
  if (interpolation_order < 1) throw DomainError("Trajectory: interpolation_order must be >= 1");
}

FracOrder::FracOrder(double order_) : order(order_), ceil_m(int(std::ceil(order_))) {
  if (!(order > 0.0)) throw DomainError("FracOrder: order must be positive");
}

std::vector<double> uniform_grid(double t_end, std::size_t intervals) {
  std::vector<double> g(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = t_end * double(i) / double(intervals);
  return g;
}

namespace {

// Local Lagrange interpolation on the stencil attached to panel [t_i, t_{i+1}],
// expressed in xi = (s - centre)/half_width.
struct Stencil {
  int first;                 // index of the first stencil node
  double centre, half_width;
  Eigen::MatrixXd coef;      // coef(j, k): coefficient of xi^k in basis j
};

Stencil make_stencil(const std::vector<double>& t, int panel, int p) {
  const int last_node = int(t.size()) - 1;
  int first = panel - (p - 1) / 2;
  first = std::clamp(first, 0, last_node - p);
  Stencil s;
  s.first = first;
  s.centre = 0.5 * (t[panel] + t[panel + 1]);
  s.half_width = 0.5 * (t[panel + 1] - t[panel]);
  Eigen::MatrixXd V(p + 1, p + 1);
  for (int r = 0; r <= p; ++r) {
    const double xi = (t[first + r] - s.centre) / s.half_width;
    double pw = 1.0;
    for (int c = 0; c <= p; ++c) {
      V(r, c) = pw;
      pw *= xi;
    }
  }
  // Rows of V^{-1} transposed give basis coefficients: sum_k coef(j,k) xi_r^k = delta_jr.
  s.coef = V.inverse().transpose();
  return s;
}

// m-th derivative (in xi) of basis polynomial coefficients.
Eigen::MatrixXd differentiate(const Eigen::MatrixXd& coef, int m) {
  const int p = int(coef.cols()) - 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(coef.rows(), std::max(p - m + 1, 1));
  for (int k = m; k <= p; ++k) {
    double f = 1.0;
    for (int q = 0; q < m; ++q) f *= (k - q);
    d.col(k - m) = coef.col(k) * f;
  }
  return d;
}

double horner(const Eigen::VectorXd& c, double x) {
  double v = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) v = v * x + c(k);
  return v;
}

class ProductRule {
 public:
  // kernel_order: order of the fractional integral applied to the m-th
  // derivative of the interpolant (kernel_order = 0 means pointwise).
  ProductRule(const std::vector<double>& t, int p, double kernel_order, int m)
      : t_(t), p_(p), kernel_order_(kernel_order), m_(m), gauss_(quad::gauss_legendre(8)) {
    const int panels = int(t.size()) - 1;
    stencils_.reserve(panels);
    derivs_.reserve(panels);
    for (int i = 0; i < panels; ++i) {
      stencils_.push_back(make_stencil(t, i, p));
      derivs_.push_back(differentiate(stencils_.back().coef, m));
    }
    if (kernel_order_ > 0.0) norm_ = rgamma(kernel_order_);
  }

  // Weights w_j with (operator f)(t_n) ~ sum_j w_j f_j.
  std::vector<double> weights(int n) const {
    std::vector<double> w(t_.size(), 0.0);
    if (kernel_order_ == 0.0) {
      const int panel = n == 0 ? 0 : n - 1;
      const Stencil& s = stencils_[panel];
      const double xi = (t_[n] - s.centre) / s.half_width;
      const double scale = std::pow(s.half_width, -m_);
      for (int j = 0; j <= p_; ++j)
        w[s.first + j] += scale * horner(derivs_[panel].row(j).transpose(), xi);
      return w;
    }
    const double tn = t_[n];
    for (int i = 0; i < n; ++i) {
      const Stencil& s = stencils_[i];
      const Eigen::MatrixXd& d = derivs_[i];
      const double width = t_[i + 1] - t_[i];
      const double gap = tn - t_[i + 1];
      const double dscale = std::pow(s.half_width, -m_);
      if (gap >= 4.0 * width) {
        for (std::size_t g = 0; g < gauss_.nodes.size(); ++g) {
          const double xi = gauss_.nodes[g];
          const double sx = s.centre + s.half_width * xi;
          const double kern = std::pow(tn - sx, kernel_order_ - 1.0) * gauss_.weights[g] *
                              s.half_width * dscale;
          for (int j = 0; j <= p_; ++j) w[s.first + j] += kern * horner(d.row(j).transpose(), xi);
        }
      } else {
        near_panel(s, d, tn, t_[i], gap, dscale, w);
      }
    }
    for (double& x : w) x *= norm_;
    return w;
  }

 private:
  // Exact moments in rho = (t_n - s)/H, H = t_n - t_i.
  void near_panel(const Stencil& s, const Eigen::MatrixXd& d, double tn, double ti, double gap,
                  double dscale, std::vector<double>& w) const {
    const double H = tn - ti;
    const double rho0 = gap / H;
    const double xin = (tn - s.centre) / s.half_width;
    const double kappa = H / s.half_width;
    const int deg = int(d.cols()) - 1;
    // Moments int_{rho0}^1 rho^(kernel_order - 1 + l) d rho.
    std::vector<double> mom(deg + 1);
    for (int l = 0; l <= deg; ++l) {
      const double e = kernel_order_ + l;
      mom[l] = (1.0 - std::pow(rho0, e)) / e;
    }
    const double front = std::pow(H, kernel_order_) * dscale;
    for (int j = 0; j <= p_; ++j) {
      // Expand sum_k d(j,k) (xin - kappa rho)^k in powers of rho.
      double total = 0.0;
      for (int k = 0; k <= deg; ++k) {
        if (d(j, k) == 0.0) continue;
        double binom = 1.0;
        for (int l = 0; l <= k; ++l) {
          const double c = binom * std::pow(xin, k - l) * std::pow(-kappa, l);
          total += d(j, k) * c * mom[l];
          binom = binom * (k - l) / (l + 1);
        }
      }
      w[s.first + j] += front * total;
    }
  }

  const std::vector<double>& t_;
  int p_;
  double kernel_order_;
  int m_;
  quad::GaussRule gauss_;
  std::vector<Stencil> stencils_;
  std::vector<Eigen::MatrixXd> derivs_;
  double norm_ = 1.0;
};

// Starting weights making the rule exact on t^sigma_k. The minimum-norm
// solution over more nodes than exponents keeps the weights, and with them
// the amplification of noise in the samples, small.
class StartingCorrection {
 public:
  StartingCorrection(const std::vector<double>& t, std::vector<double> exponents)
      : exps_(std::move(exponents)) {
    const int K = int(exps_.size());
    if (K == 0) return;
    if (int(t.size()) <= K) throw DomainError("starting weights: grid too short");
    const int L = std::min(spread * K, int(t.size()) - 1);
    Eigen::MatrixXd V(K, L);
    row_scale_.resize(K);
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < L; ++j) V(k, j) = std::pow(t[j + 1], exps_[k]);
      row_scale_(k) = 1.0 / V.row(k).cwiseAbs().maxCoeff();
      V.row(k) *= row_scale_(k);
    }
    pinv_ = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(V).pseudoInverse();
    powers_.resize(K);
    for (int k = 0; k < K; ++k) {
      powers_[k].resize(t.size());
      for (std::size_t j = 0; j < t.size(); ++j)
        powers_[k][j] = std::pow(t[j], exps_[k]);
    }
  }

  template <class Exact>
  void apply(std::vector<double>& w, Exact exact) const {
    const int K = int(exps_.size());
    if (K == 0) return;
    Eigen::VectorXd rhs(K);
    bool any = false;
    for (int k = 0; k < K; ++k) {
      double q = 0.0, q_abs = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        q += w[j] * powers_[k][j];
        q_abs += std::abs(w[j] * powers_[k][j]);
      }
      const double e = exact(exps_[k]);
      rhs(k) = e - q;
      // Defects at rounding level (always the case for polynomials the base
      // rule reproduces) are not corrected: the system would amplify them.
      if (std::abs(rhs(k)) <= 64.0 * std::numeric_limits<double>::epsilon() * (q_abs + std::abs(e))) rhs(k) = 0.0;
      any = any || rhs(k) != 0.0;
    }
    // A singular exact value (t = 0 with a negative power) leaves the rule as is.
    if (!any || !rhs.allFinite()) return;
    const Eigen::VectorXd c = pinv_ * rhs.cwiseProduct(row_scale_);
    for (Eigen::Index j = 0; j < c.size(); ++j) w[j + 1] += c(j);
  }

 private:
  static constexpr int spread = 3;
  std::vector<double> exps_;
  Eigen::VectorXd row_scale_;
  Eigen::MatrixXd pinv_;
  std::vector<std::vector<double>> powers_;
};

// Non-integer exponents in (min_exclusive, degree + 1). When any is present
// the integer powers 0..degree, which the base rule already reproduces, are
// added as constraints so the correction keeps them exact. Higher powers are
// resolved by the base rule; correcting them would only amplify rounding.
std::vector<double> filtered(const StartingTerms& start, double min_exclusive, int degree) {
  std::vector<double> out;
  auto add = [&](double s) {
    if (std::find_if(out.begin(), out.end(), [&](double o) { return std::abs(o - s) < 1e-12; }) ==
        out.end())
      out.push_back(s);
  };
  for (double s : start.exponents)
    if (s > min_exclusive && s < degree + 1 && std::abs(s - std::round(s)) >= 1e-12) add(s);
  if (out.empty()) return out;
  for (int k = 0; k <= degree; ++k) add(double(k));
  return out;
}

Trajectory apply_rule(const Trajectory& f, const ProductRule& rule,
                      const StartingCorrection& corr, auto exact_fn) {
  Trajectory out = f;
  const int N = int(f.size());
  for (int n = 0; n < N; ++n) {
    std::vector<double> w = rule.weights(n);
    corr.apply(w, [&](double sigma) { return exact_fn(sigma, f.grid[n]); });
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(f.rows(), f.cols());
    for (int j = 0; j < N; ++j)
      if (w[j] != 0.0) acc += w[j] * f.values[j];
    out.values[n] = acc;
  }
  return out;
}

void require_panels(const Trajectory& f) {
  if (int(f.size()) < f.interpolation_order + 1)
    throw DomainError("trajectory has fewer samples than the interpolation stencil");
}

}  // namespace

Trajectory frac_integral(const Trajectory& f, FracOrder a, const StartingTerms& start) {
  require_panels(f);
  const ProductRule rule(f.grid, f.interpolation_order, a.order, 0);
  const StartingCorrection corr(f.grid, filtered(start, -1.0, f.interpolation_order));
  return apply_rule(f, rule, corr, [&](double sigma, double t) {
    return t == 0.0 ? 0.0
                    : std::exp(std::lgamma(sigma + 1.0) - std::lgamma(sigma + 1.0 + a.order)) *
                          std::pow(t, sigma + a.order);
  });
}

Trajectory caputo_derivative(const Trajectory& f, FracOrder a, const StartingTerms& start) {
  const int m = a.ceil_m;
  if (f.interpolation_order < m + 1)
    throw InsufficientSmoothness("caputo_derivative: interpolation_order must be >= ceil(order) + 1");
  require_panels(f);
  const ProductRule rule(f.grid, f.interpolation_order, double(m) - a.order, m);
  const StartingCorrection corr(f.grid, filtered(start, double(m) - 1.0, f.interpolation_order));
  return apply_rule(f, rule, corr, [&](double sigma, double t) {
    if (sigma == std::round(sigma) && sigma < m) return 0.0;
    const double e = sigma - a.order;
    const double c = std::exp(std::lgamma(sigma + 1.0)) * rgamma(sigma + 1.0 - a.order);
    if (t == 0.0) return e > 0.0 ? 0.0 : e == 0.0 ? c : std::numeric_limits<double>::quiet_NaN();
    return c * std::pow(t, e);
  });
}

Eigen::MatrixXcd initial_derivative(const Trajectory& f, int k) {
  require_panels(f);
  const int p = f.interpolation_order;
  if (k > p) throw InsufficientSmoothness("initial_derivative: order exceeds interpolation order");
  const Stencil s = make_stencil(f.grid, 0, p);
  const Eigen::MatrixXd d = differentiate(s.coef, k);
  const double xi = (0.0 - s.centre) / s.half_width;
  const double scale = std::pow(s.half_width, -k);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(f.rows(), f.cols());
  for (int j = 0; j <= p; ++j)
    acc += scale * horner(d.row(j).transpose(), xi) * f.values[s.first + j];
  return acc;
}

Trajectory rl_derivative(const Trajectory& f, FracOrder a, const StartingTerms& start) {
  Trajectory out = caputo_derivative(f, a, start);
  const int m = a.ceil_m;
  double scale = 0.0;
  for (const auto& v : f.values) scale = std::max(scale, v.norm());
  bool singular_at_zero = false;
  for (int k = 0; k < m; ++k) {
    const Eigen::MatrixXcd d0 = initial_derivative(f, k);
    if (d0.norm() > 1e-12 * std::max(scale, 1e-300) && double(k) < a.order)
      singular_at_zero = true;
    const double rg = rgamma(k - a.order + 1.0);
    for (std::size_t n = 1; n < f.size(); ++n)
      out.values[n] += std::pow(f.grid[n], k - a.order) * rg * d0;
  }
  if (singular_at_zero)
    out.values[0].setConstant(std::numeric_limits<double>::quiet_NaN());
  return out;
}

}  // namespace invrof
