#include "invrof/quadrature.hpp"

namespace invrof::quad {

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

void WynnEpsilon::push(cplx partial_sum) {
  constexpr std::size_t window = 40;
  sums_.push_back(partial_sum);
  if (sums_.size() > window) sums_.erase(sums_.begin());
  const std::size_t n = sums_.size();
  estimate_ = sums_.back();
  error_ = n >= 2 ? std::abs(sums_[n - 1] - sums_[n - 2])
                  : std::numeric_limits<double>::infinity();
  if (n < 3) return;

  std::vector<cplx> prev(n + 1, cplx{});
  std::vector<cplx> cur(sums_.begin(), sums_.end());
  for (std::size_t k = 1; cur.size() >= 2; ++k) {
    std::vector<cplx> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const cplx diff = cur[i + 1] - cur[i];
      if (diff == cplx{}) return;  // converged exactly; keep current best
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    prev = cur;
    cur = std::move(next);
    if (k % 2 == 0 && cur.size() >= 2) {
      const double err = std::abs(cur.back() - cur[cur.size() - 2]);
      if (err < error_) {
        error_ = err;
        estimate_ = cur.back();
      }
    }
  }
}

}  // namespace invrof::quad
