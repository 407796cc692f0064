// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma on x86-64 only;
// callers reach these through the dispatch table in kernels.cpp.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "movda/kernels.hpp"
#include "scalar_math.hpp"

namespace movda::kernels::avx2 {

namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(z) for z in [-745, 0]: Cody-Waite reduction against ln2, degree-13
// Taylor kernel, exponent reassembled through the bit pattern.
inline __m256d vexp_neg(__m256d z) {
  const __m256d fn = _mm256_round_pd(
      _mm256_mul_pd(z, set1(1.4426950408889634074)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(fn, set1(6.93147180369123816490e-01), z);
  r = _mm256_fnmadd_pd(fn, set1(1.90821492927058770002e-10), r);

  __m256d p = set1(1.6059043836821614e-10);               // 1/13!
  p = _mm256_fmadd_pd(p, r, set1(2.08767569878681e-09));  // 1/12!
  p = _mm256_fmadd_pd(p, r, set1(2.5052108385441720e-08));
  p = _mm256_fmadd_pd(p, r, set1(2.7557319223985893e-07));
  p = _mm256_fmadd_pd(p, r, set1(2.7557319223985891e-06));
  p = _mm256_fmadd_pd(p, r, set1(2.4801587301587302e-05));
  p = _mm256_fmadd_pd(p, r, set1(1.9841269841269841e-04));
  p = _mm256_fmadd_pd(p, r, set1(1.3888888888888889e-03));
  p = _mm256_fmadd_pd(p, r, set1(8.3333333333333333e-03));
  p = _mm256_fmadd_pd(p, r, set1(4.1666666666666664e-02));
  p = _mm256_fmadd_pd(p, r, set1(1.6666666666666666e-01));
  p = _mm256_fmadd_pd(p, r, set1(0.5));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0));

  const __m128i n32 = _mm256_cvtpd_epi32(fn);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// expm1(z) for z in (-0.5, 0]: z * sum z^k/(k+1)!, keeping full relative
// accuracy as z -> 0.
inline __m256d vexpm1_small(__m256d z) {
  __m256d p = set1(7.6471637318198164e-13);               // 1/15!
  p = _mm256_fmadd_pd(p, z, set1(1.1470745597729725e-11));
  p = _mm256_fmadd_pd(p, z, set1(1.6059043836821614e-10));
  p = _mm256_fmadd_pd(p, z, set1(2.0876756987868099e-09));
  p = _mm256_fmadd_pd(p, z, set1(2.5052108385441720e-08));
  p = _mm256_fmadd_pd(p, z, set1(2.7557319223985893e-07));
  p = _mm256_fmadd_pd(p, z, set1(2.7557319223985891e-06));
  p = _mm256_fmadd_pd(p, z, set1(2.4801587301587302e-05));
  p = _mm256_fmadd_pd(p, z, set1(1.9841269841269841e-04));
  p = _mm256_fmadd_pd(p, z, set1(1.3888888888888889e-03));
  p = _mm256_fmadd_pd(p, z, set1(8.3333333333333333e-03));
  p = _mm256_fmadd_pd(p, z, set1(4.1666666666666664e-02));
  p = _mm256_fmadd_pd(p, z, set1(1.6666666666666666e-01));
  p = _mm256_fmadd_pd(p, z, set1(0.5));
  p = _mm256_fmadd_pd(p, z, set1(1.0));
  return _mm256_mul_pd(z, p);
}

struct TanhSech2 {
  __m256d th;
  __m256d s2;
};

// Same em = expm1(-2|x|) formulation as detail::tanh_sech2.
inline TanhSech2 vtanh_sech2(__m256d x) {
  const __m256d sign_mask = set1(-0.0);
  const __m256d sgn = _mm256_and_pd(x, sign_mask);
  __m256d ax = _mm256_andnot_pd(sign_mask, x);
  ax = _mm256_min_pd(ax, set1(350.0));
  const __m256d z = _mm256_mul_pd(ax, set1(-2.0));

  const __m256d em_small = vexpm1_small(z);
  const __m256d em_big = _mm256_sub_pd(vexp_neg(z), set1(1.0));
  const __m256d use_small = _mm256_cmp_pd(z, set1(-0.5), _CMP_GT_OQ);
  const __m256d em = _mm256_blendv_pd(em_big, em_small, use_small);

  const __m256d den = _mm256_add_pd(set1(2.0), em);
  const __m256d t =
      _mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), em), den);
  TanhSech2 out;
  out.th = _mm256_or_pd(t, sgn);
  out.s2 = _mm256_div_pd(
      _mm256_mul_pd(set1(4.0), _mm256_add_pd(set1(1.0), em)),
      _mm256_mul_pd(den, den));
  return out;
}

constexpr std::size_t kBlock = 1024;  // plain adds per lane between flushes

}  // namespace

void emov_batch(const double* dr, const double* ih, double* y, std::size_t n,
                const MovdaParams& p) {
  const __m256d alpha = set1(p.alpha);
  const __m256d beta = set1(p.beta);
  const __m256d gamma = set1(p.gamma);
  const __m256d delta = set1(p.delta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_loadu_pd(dr + i);
    const __m256d hi = _mm256_loadu_pd(ih + i);
    const TanhSech2 ts = vtanh_sech2(_mm256_mul_pd(beta, d));
    const __m256d v = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(alpha, ts.th), gamma),
        _mm256_mul_pd(delta, hi));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) {
    double th, s2;
    detail::tanh_sech2(p.beta * dr[i], &th, &s2);
    y[i] = p.alpha * th + p.gamma + p.delta * ih[i];
  }
}

NormalEq fit_accumulate(const double* dr, const double* ih, const double* tm,
                        std::size_t n, const MovdaParams& p) {
  using detail::CompSum;
  // index map: 0..9 upper-triangular jtj (7 = sample count, handled
  // exactly), 10..13 jtr, 14 sse
  CompSum acc[15];

  const __m256d alpha = set1(p.alpha);
  const __m256d beta = set1(p.beta);
  const __m256d gamma = set1(p.gamma);
  const __m256d delta = set1(p.delta);

  std::size_t i = 0;
  const std::size_t vec_end = n - n % 4;
  while (i < vec_end) {
    const std::size_t end = std::min(vec_end, i + kBlock);
    __m256d v[15];
    for (auto& a : v) a = _mm256_setzero_pd();
    for (; i < end; i += 4) {
      const __m256d d = _mm256_loadu_pd(dr + i);
      const __m256d hi = _mm256_loadu_pd(ih + i);
      const __m256d t = _mm256_loadu_pd(tm + i);
      const TanhSech2 ts = vtanh_sech2(_mm256_mul_pd(beta, d));
      const __m256d j0 = ts.th;
      const __m256d j1 = _mm256_mul_pd(_mm256_mul_pd(alpha, d), ts.s2);
      const __m256d e = _mm256_add_pd(
          _mm256_add_pd(_mm256_mul_pd(alpha, ts.th), gamma),
          _mm256_mul_pd(delta, hi));
      const __m256d r = _mm256_sub_pd(t, e);
      v[0] = _mm256_fmadd_pd(j0, j0, v[0]);
      v[1] = _mm256_fmadd_pd(j0, j1, v[1]);
      v[2] = _mm256_add_pd(v[2], j0);
      v[3] = _mm256_fmadd_pd(j0, hi, v[3]);
      v[4] = _mm256_fmadd_pd(j1, j1, v[4]);
      v[5] = _mm256_add_pd(v[5], j1);
      v[6] = _mm256_fmadd_pd(j1, hi, v[6]);
      v[8] = _mm256_add_pd(v[8], hi);
      v[9] = _mm256_fmadd_pd(hi, hi, v[9]);
      v[10] = _mm256_fmadd_pd(j0, r, v[10]);
      v[11] = _mm256_fmadd_pd(j1, r, v[11]);
      v[12] = _mm256_add_pd(v[12], r);
      v[13] = _mm256_fmadd_pd(hi, r, v[13]);
      v[14] = _mm256_fmadd_pd(r, r, v[14]);
    }
    for (int k = 0; k < 15; ++k)
      if (k != 7) acc[k].add(hsum(v[k]));
  }
  for (; i < n; ++i) {
    double th, s2;
    detail::tanh_sech2(p.beta * dr[i], &th, &s2);
    const double j0 = th;
    const double j1 = p.alpha * dr[i] * s2;
    const double hi = ih[i];
    const double e = p.alpha * th + p.gamma + p.delta * hi;
    const double r = tm[i] - e;
    acc[0].add(j0 * j0);
    acc[1].add(j0 * j1);
    acc[2].add(j0);
    acc[3].add(j0 * hi);
    acc[4].add(j1 * j1);
    acc[5].add(j1);
    acc[6].add(j1 * hi);
    acc[8].add(hi);
    acc[9].add(hi * hi);
    acc[10].add(j0 * r);
    acc[11].add(j1 * r);
    acc[12].add(r);
    acc[13].add(hi * r);
    acc[14].add(r * r);
  }

  NormalEq out;
  for (int k = 0; k < 10; ++k) out.jtj[k] = acc[k].value();
  out.jtj[7] = static_cast<double>(n);
  for (int k = 0; k < 4; ++k) out.jtr[k] = acc[10 + k].value();
  out.sse = acc[14].value();
  return out;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  detail::CompSum total;
  const __m256d sign_mask = set1(-0.0);
  std::size_t i = 0;
  const std::size_t vec_end = n - n % 4;
  while (i < vec_end) {
    const std::size_t end = std::min(vec_end, i + kBlock);
    __m256d acc = _mm256_setzero_pd();
    for (; i < end; i += 4) {
      const __m256d d =
          _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
      acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
    }
    total.add(hsum(acc));
  }
  for (; i < n; ++i) total.add(std::abs(a[i] - b[i]));
  return total.value();
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  detail::CompSum total;
  std::size_t i = 0;
  const std::size_t vec_end = n - n % 4;
  while (i < vec_end) {
    const std::size_t end = std::min(vec_end, i + kBlock);
    __m256d acc = _mm256_setzero_pd();
    for (; i < end; i += 4) {
      const __m256d d =
          _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    total.add(hsum(acc));
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total.add(d * d);
  }
  return total.value();
}

}  // namespace movda::kernels::avx2
