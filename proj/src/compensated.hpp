#pragma once

#include <cmath>
#include <complex>

namespace invrof::detail {

// Neumaier's variant of Kahan summation for complex terms.
class CompensatedSum {
 public:
  void add(std::complex<double> v) {
    add(re_, re_c_, v.real());
    add(im_, im_c_, v.imag());
  }
  std::complex<double> value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

}  // namespace invrof::detail
