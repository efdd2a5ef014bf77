#pragma once

// Generic quadrature building blocks shared by the special functions,
// the inverse transforms and the diagnostics. Integrands may return
// double, std::complex<double> or Eigen vectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace invrof::quad {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.norm();
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}
template <class Derived>
bool finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <class T>
struct Estimate {
  T value;
  double error = 0.0;
  long evaluations = 0;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

namespace detail {

inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss7_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
auto gk15(F& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T kron = fc * kronrod_w[7];
  T gauss = fc * gauss7_w[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kronrod_x[j];
    T f1 = f(c - dx);
    T f2 = f(c + dx);
    T s = f1 + f2;
    kron += s * kronrod_w[j];
    if (j % 2 == 1) gauss += s * gauss7_w[j / 2];
  }
  kron *= h;
  gauss *= h;
  const double err = magnitude(T(kron - gauss));
  return std::pair<T, double>{kron, err};
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7/15 on [a, b]. Bisects the interval with the
// largest error estimate until the total estimate meets the tolerance.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
               int max_segments = 4000) {
  using T = std::decay_t<decltype(f(a))>;
  struct Segment {
    double a, b;
    T value;
    double error;
  };
  auto cmp = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::priority_queue<Segment, std::vector<Segment>, decltype(cmp)> heap(cmp);

  auto first = detail::gk15(f, a, b);
  T total = first.first;
  double total_err = first.second;
  heap.push({a, b, first.first, first.second});
  long evals = 15;
  int segments = 1;
  while (total_err > std::max(abs_tol, rel_tol * magnitude(total)) &&
         segments < max_segments) {
    Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      heap.push(s);
      break;
    }
    auto left = detail::gk15(f, s.a, m);
    auto right = detail::gk15(f, m, s.b);
    evals += 30;
    total += left.first + right.first - s.value;
    total_err += left.second + right.second - s.error;
    heap.push({s.a, m, left.first, left.second});
    heap.push({m, s.b, right.first, right.second});
    ++segments;
  }
  // Re-sum from the segments to shed drift from the running updates.
  T sum = heap.top().value;
  double err = heap.top().error;
  heap.pop();
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return Estimate<T>{sum, err, evals};
}

// Fixed composite Gauss-Legendre over [a, b] split into `panels` pieces.
template <class F>
auto integrate_fixed(F&& f, double a, double b, int panels, const GaussRule& rule) {
  using T = std::decay_t<decltype(f(a))>;
  const double h = (b - a) / panels;
  T sum = f(a + 0.5 * h) * 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += f(c + 0.5 * h * rule.nodes[i]) * (0.5 * h * rule.weights[i]);
  }
  return sum;
}

// Double-exponential (exp-sinh) rule on (0, inf): x = scale*exp(pi/2*sinh(u)).
// Suited to integrands with an algebraic or essential singularity at 0 and
// exponential decay at infinity. Refines the step until two consecutive
// levels agree to `rel_tol` relative to the integral of |f|.
template <class F>
auto integrate_exp_sinh(F&& f, double scale, double rel_tol = 1e-15, int max_level = 9) {
  using T = std::decay_t<decltype(f(1.0))>;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  auto node = [&](double u, double& weight) {
    const double e = half_pi * std::sinh(u);
    const double x = scale * std::exp(e);
    weight = x * half_pi * std::cosh(u);
    return x;
  };
  long evals = 0;
  auto eval_at = [&](double u, double& mag) -> T {
    double w;
    const double x = node(u, w);
    ++evals;
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(w)) {
      mag = 0.0;
      return f(scale) * 0.0;
    }
    T v = f(x);
    if (!finite(v)) {
      mag = 0.0;
      return f(scale) * 0.0;
    }
    T r = v * w;
    mag = magnitude(r);
    return r;
  };

  // Level 0 with unit step determines the truncation range.
  double h = 0.5;
  double mag0;
  T sum = eval_at(0.0, mag0);
  double l1 = mag0;
  double u_lo = 0.0, u_hi = 0.0;
  for (int dir : {-1, 1}) {
    int quiet = 0;
    double u = 0.0;
    for (int k = 1; k <= 16 / h; ++k) {
      u = dir * k * h;
      double mag;
      T v = eval_at(u, mag);
      sum += v;
      l1 += mag;
      if (mag <= 1e-18 * l1) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
    }
    if (dir < 0) u_lo = u; else u_hi = u;
  }
  T estimate = sum * h;
  double error = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    T add = sum * 0.0;
    for (double u = u_lo + h; u < u_hi; u += 2.0 * h) {
      double mag;
      add += eval_at(u, mag);
      l1 += mag;
    }
    sum += add;
    T next = sum * h;
    error = magnitude(T(next - estimate));
    estimate = next;
    if (error <= rel_tol * l1 * h && level >= 2) break;
  }
  return Estimate<T>{estimate, error, evals};
}

// Wynn epsilon extrapolation of a scalar sequence of partial sums.
class WynnEpsilon {
 public:
  using cplx = std::complex<double>;

  void push(cplx partial_sum);
  cplx estimate() const { return estimate_; }
  double error() const { return error_; }
  std::size_t size() const { return sums_.size(); }

 private:
  std::vector<cplx> sums_;
  cplx estimate_{};
  double error_ = std::numeric_limits<double>::infinity();
};

}  // namespace invrof::quad
