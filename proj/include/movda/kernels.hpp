#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "movda/ratings.hpp"

// Batch kernels for the data-parallel inner loops: expected-margin
// evaluation over sample arrays, the fused residual/Jacobian/normal-equation
// accumulation used by the least-squares fitter, and the reductions behind
// the evaluation metrics.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant selected at runtime. All summations are compensated
// (Neumaier), so the variants agree to ~1e-13 relative and either one
// stays within 1e-10 of plain sequential summation.
namespace movda::kernels {

// Accumulated normal equations of the margin model residuals, in
// (alpha, beta, gamma, delta) space. jtj holds the upper triangle of
// J^T J row-major: (0,0)(0,1)(0,2)(0,3)(1,1)(1,2)(1,3)(2,2)(2,3)(3,3).
struct NormalEq {
  std::array<double, 10> jtj{};
  std::array<double, 4> jtr{};
  double sse = 0.0;
};

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Backend in effect. Defaults to the best available; the MOVDA_KERNELS
// environment variable ("scalar" or "avx2") overrides, as does
// force_backend().
Backend active_backend();
void force_backend(Backend b);  // throws config_error if unavailable
void reset_backend();           // back to automatic selection

// y[i] = alpha * tanh(beta * dr[i]) + gamma + delta * ih[i]
void expected_mov_batch(const double* dr, const double* ih, double* y,
                        std::size_t n, const MovdaParams& p);

// One fused pass over the fit samples: residuals r[i] = tm[i] - E_MOV,
// Jacobian columns (tanh(b*dr), a*dr*sech^2(b*dr), 1, ih), accumulated
// into J^T J, J^T r and the residual sum of squares.
NormalEq fit_accumulate(const double* dr, const double* ih, const double* tm,
                        std::size_t n, const MovdaParams& p);

// sum over |a[i] - b[i]|
double sum_abs_diff(const double* a, const double* b, std::size_t n);
// sum over (a[i] - b[i])^2
double sum_sq_diff(const double* a, const double* b, std::size_t n);

}  // namespace movda::kernels
