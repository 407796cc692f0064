#pragma once

#include <cmath>

// Shared scalar helpers for the kernel implementations. Both the scalar
// reference kernels and the SIMD tail loops use these, so the variants
// differ only in their vector bodies.
namespace movda::kernels::detail {

// tanh(x) and sech^2(x) from expm1(-2|x|). Writing both through
// em = e^{-2|x|} - 1 keeps sech^2 free of the 1 - tanh^2 cancellation
// that loses all precision once |x| > 18.
inline void tanh_sech2(double x, double* th, double* s2) {
  const double ax = std::abs(x);
  const double em = std::expm1(-2.0 * (ax < 350.0 ? ax : 350.0));
  const double den = 2.0 + em;
  const double t = -em / den;
  *th = std::copysign(t, x);
  *s2 = 4.0 * (1.0 + em) / (den * den);
}

// Neumaier compensated accumulator.
struct CompSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace movda::kernels::detail
