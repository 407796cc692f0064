#include "movda/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>

#include "movda/errors.hpp"
#include "scalar_math.hpp"

namespace movda::kernels {

namespace {

// ---------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------

void emov_batch_scalar(const double* dr, const double* ih, double* y,
                       std::size_t n, const MovdaParams& p) {
  for (std::size_t i = 0; i < n; ++i)
    y[i] = p.alpha * std::tanh(p.beta * dr[i]) + p.gamma + p.delta * ih[i];
}

NormalEq fit_accumulate_scalar(const double* dr, const double* ih,
                               const double* tm, std::size_t n,
                               const MovdaParams& p) {
  using detail::CompSum;
  CompSum jtj[10], jtr[4], sse;
  for (std::size_t i = 0; i < n; ++i) {
    double th, s2;
    detail::tanh_sech2(p.beta * dr[i], &th, &s2);
    const double j0 = th;
    const double j1 = p.alpha * dr[i] * s2;
    const double hi = ih[i];
    const double e = p.alpha * th + p.gamma + p.delta * hi;
    const double r = tm[i] - e;
    jtj[0].add(j0 * j0);
    jtj[1].add(j0 * j1);
    jtj[2].add(j0);
    jtj[3].add(j0 * hi);
    jtj[4].add(j1 * j1);
    jtj[5].add(j1);
    jtj[6].add(j1 * hi);
    jtj[8].add(hi);
    jtj[9].add(hi * hi);
    jtr[0].add(j0 * r);
    jtr[1].add(j1 * r);
    jtr[2].add(r);
    jtr[3].add(hi * r);
    sse.add(r * r);
  }
  NormalEq out;
  for (int k = 0; k < 10; ++k) out.jtj[k] = jtj[k].value();
  out.jtj[7] = static_cast<double>(n);  // column of ones
  for (int k = 0; k < 4; ++k) out.jtr[k] = jtr[k].value();
  out.sse = sse.value();
  return out;
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  detail::CompSum s;
  for (std::size_t i = 0; i < n; ++i) s.add(std::abs(a[i] - b[i]));
  return s.value();
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  detail::CompSum s;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s.add(d * d);
  }
  return s.value();
}

struct KernelTable {
  void (*emov_batch)(const double*, const double*, double*, std::size_t,
                     const MovdaParams&);
  NormalEq (*fit_acc)(const double*, const double*, const double*,
                      std::size_t, const MovdaParams&);
  double (*abs_diff)(const double*, const double*, std::size_t);
  double (*sq_diff)(const double*, const double*, std::size_t);
};

constexpr KernelTable kScalarTable = {emov_batch_scalar, fit_accumulate_scalar,
                                      sum_abs_diff_scalar,
                                      sum_sq_diff_scalar};

}  // namespace

#if defined(MOVDA_HAVE_AVX2_TU)
// Defined in kernels_avx2.cpp.
namespace avx2 {
void emov_batch(const double* dr, const double* ih, double* y, std::size_t n,
                const MovdaParams& p);
NormalEq fit_accumulate(const double* dr, const double* ih, const double* tm,
                        std::size_t n, const MovdaParams& p);
double sum_abs_diff(const double* a, const double* b, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

namespace {

const KernelTable* table_for(Backend b) {
#if defined(MOVDA_HAVE_AVX2_TU)
  static constexpr KernelTable kAvx2Table = {
      avx2::emov_batch, avx2::fit_accumulate, avx2::sum_abs_diff,
      avx2::sum_sq_diff};
  if (b == Backend::avx2) return &kAvx2Table;
#endif
  (void)b;
  return &kScalarTable;
}

bool cpu_has_avx2() {
#if defined(MOVDA_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::optional<Backend>& forced_backend() {
  static std::optional<Backend> forced;
  return forced;
}

Backend detect_backend() {
  if (const char* env = std::getenv("MOVDA_KERNELS")) {
    const std::string value(env);
    if (value == "scalar") return Backend::scalar;
    if (value == "avx2" && backend_available(Backend::avx2))
      return Backend::avx2;
  }
  return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

const KernelTable& active_table() {
  if (forced_backend()) return *table_for(*forced_backend());
  static const KernelTable* detected = table_for(detect_backend());
  return *detected;
}

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
  return cpu_has_avx2();
}

Backend active_backend() {
  if (forced_backend()) return *forced_backend();
  static const Backend detected = detect_backend();
  return detected;
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw config_error(std::string("kernel backend not available: ") +
                       backend_name(b));
  forced_backend() = b;
}

void reset_backend() { forced_backend().reset(); }

void expected_mov_batch(const double* dr, const double* ih, double* y,
                        std::size_t n, const MovdaParams& p) {
  p.validate();
  active_table().emov_batch(dr, ih, y, n, p);
}

NormalEq fit_accumulate(const double* dr, const double* ih, const double* tm,
                        std::size_t n, const MovdaParams& p) {
  p.validate();
  return active_table().fit_acc(dr, ih, tm, n, p);
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return active_table().abs_diff(a, b, n);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return active_table().sq_diff(a, b, n);
}

}  // namespace movda::kernels
