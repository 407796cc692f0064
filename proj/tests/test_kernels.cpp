#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kernels/scalar_math.hpp"
#include "movda/errors.hpp"
#include "movda/kernels.hpp"

using namespace movda;
namespace k = movda::kernels;

namespace {

struct Batch {
  std::vector<double> dr, ih, tm;
};

Batch random_batch(std::size_t n, std::uint32_t seed, double dr_span = 3000.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dr(-dr_span, dr_span);
  std::uniform_real_distribution<double> tm(-60.0, 60.0);
  std::uniform_int_distribution<int> ind(-1, 1);
  Batch b;
  b.dr.resize(n);
  b.ih.resize(n);
  b.tm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.dr[i] = dr(rng);
    b.ih[i] = static_cast<double>(ind(rng));
    b.tm[i] = tm(rng);
  }
  return b;
}

MovdaParams test_params() {
  MovdaParams p;
  p.alpha = 12.0;
  p.beta = 0.004;
  p.gamma = 0.4;
  p.delta = 2.8;
  return p;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

struct BackendGuard {
  ~BackendGuard() { k::reset_backend(); }
};

}  // namespace

TEST_CASE("backend selection") {
  BackendGuard guard;
  CHECK(k::backend_available(k::Backend::scalar));
  k::force_backend(k::Backend::scalar);
  CHECK(k::active_backend() == k::Backend::scalar);
  k::reset_backend();
  if (!k::backend_available(k::Backend::avx2))
    CHECK_THROWS_AS(k::force_backend(k::Backend::avx2), config_error);
  CHECK(std::string(k::backend_name(k::Backend::avx2)) == "avx2");
}

TEST_CASE("scalar expected_mov_batch matches the single-value operation") {
  BackendGuard guard;
  k::force_backend(k::Backend::scalar);
  const MovdaParams p = test_params();
  const Batch b = random_batch(257, 1);
  std::vector<double> y(b.dr.size());
  k::expected_mov_batch(b.dr.data(), b.ih.data(), y.data(), b.dr.size(), p);
  for (std::size_t i = 0; i < b.dr.size(); ++i) {
    const auto ind = home_indicator_from_int(static_cast<int>(b.ih[i]));
    CHECK_EQ(y[i], expected_mov(b.dr[i], ind, p));
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!k::backend_available(k::Backend::avx2)) return;
  BackendGuard guard;
  const MovdaParams p = test_params();
  for (const std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                              std::size_t{4}, std::size_t{5}, std::size_t{127},
                              std::size_t{1024}, std::size_t{4099},
                              std::size_t{20000}}) {
    const Batch b = random_batch(n, static_cast<std::uint32_t>(n) + 11);

    k::force_backend(k::Backend::scalar);
    std::vector<double> y_s(n);
    k::expected_mov_batch(b.dr.data(), b.ih.data(), y_s.data(), n, p);
    const k::NormalEq eq_s =
        k::fit_accumulate(b.dr.data(), b.ih.data(), b.tm.data(), n, p);
    const double abs_s = k::sum_abs_diff(b.tm.data(), y_s.data(), n);
    const double sq_s = k::sum_sq_diff(b.tm.data(), y_s.data(), n);

    k::force_backend(k::Backend::avx2);
    std::vector<double> y_v(n);
    k::expected_mov_batch(b.dr.data(), b.ih.data(), y_v.data(), n, p);
    const k::NormalEq eq_v =
        k::fit_accumulate(b.dr.data(), b.ih.data(), b.tm.data(), n, p);
    const double abs_v = k::sum_abs_diff(b.tm.data(), y_v.data(), n);
    const double sq_v = k::sum_sq_diff(b.tm.data(), y_v.data(), n);

    for (std::size_t i = 0; i < n; ++i) CHECK(close(y_s[i], y_v[i], 1e-12));
    for (int f = 0; f < 10; ++f) CHECK(close(eq_s.jtj[f], eq_v.jtj[f], 1e-10));
    for (int f = 0; f < 4; ++f) CHECK(close(eq_s.jtr[f], eq_v.jtr[f], 1e-10));
    CHECK(close(eq_s.sse, eq_v.sse, 1e-10));
    CHECK(close(abs_s, abs_v, 1e-10));
    CHECK(close(sq_s, sq_v, 1e-10));
  }
}

TEST_CASE("avx2 tanh is accurate at extreme and tiny arguments") {
  if (!k::backend_available(k::Backend::avx2)) return;
  BackendGuard guard;
  MovdaParams p = test_params();
  p.alpha = 1.0;
  p.beta = 1.0;
  p.gamma = 0.0;
  p.delta = 0.0;
  std::vector<double> dr = {0.0,    1e-300, 1e-12, 1e-6, 0.2499, 0.25,
                            0.2501, 1.0,    5.0,   17.9, 19.5,   25.0,
                            350.0,  1000.0, -0.3,  -2.0, -19.0,  -400.0};
  std::vector<double> ih(dr.size(), 0.0);
  std::vector<double> y(dr.size());
  k::force_backend(k::Backend::avx2);
  k::expected_mov_batch(dr.data(), ih.data(), y.data(), dr.size(), p);
  for (std::size_t i = 0; i < dr.size(); ++i) {
    const double exact = std::tanh(dr[i]);
    CHECK(std::abs(y[i] - exact) <=
          1e-14 * (1.0 + std::abs(exact)) + 1e-300);
    if (dr[i] != 0.0 && std::abs(dr[i]) < 1.0)
      CHECK(std::abs(y[i] - exact) <= 1e-13 * std::abs(exact));
  }
}

TEST_CASE("fit_accumulate agrees with a direct long-double evaluation") {
  BackendGuard guard;
  k::force_backend(k::Backend::scalar);
  MovdaParams p = test_params();
  const Batch b = random_batch(1537, 5, 900.0);  // keep |beta*dr| moderate
  const k::NormalEq eq =
      k::fit_accumulate(b.dr.data(), b.ih.data(), b.tm.data(), b.dr.size(), p);

  long double jtj[10] = {}, jtr[4] = {}, sse = 0.0L;
  for (std::size_t i = 0; i < b.dr.size(); ++i) {
    const long double u = static_cast<long double>(p.beta) * b.dr[i];
    const long double th = std::tanh(u);
    const long double s2 = 1.0L - th * th;
    const long double j0 = th;
    const long double j1 = p.alpha * b.dr[i] * s2;
    const long double hi = b.ih[i];
    const long double r = b.tm[i] - (p.alpha * th + p.gamma + p.delta * hi);
    jtj[0] += j0 * j0;
    jtj[1] += j0 * j1;
    jtj[2] += j0;
    jtj[3] += j0 * hi;
    jtj[4] += j1 * j1;
    jtj[5] += j1;
    jtj[6] += j1 * hi;
    jtj[7] += 1.0L;
    jtj[8] += hi;
    jtj[9] += hi * hi;
    jtr[0] += j0 * r;
    jtr[1] += j1 * r;
    jtr[2] += r;
    jtr[3] += hi * r;
    sse += r * r;
  }
  for (int f = 0; f < 10; ++f)
    CHECK(close(eq.jtj[f], static_cast<double>(jtj[f]), 1e-9));
  for (int f = 0; f < 4; ++f)
    CHECK(close(eq.jtr[f], static_cast<double>(jtr[f]), 1e-9));
  CHECK(close(eq.sse, static_cast<double>(sse), 1e-9));
}

TEST_CASE("reductions stay exact under mixed magnitudes") {
  BackendGuard guard;
  // alternating huge/small terms: a plain sum loses the small ones
  std::vector<double> a, b;
  long double exact = 0.0L;
  for (int i = 0; i < 4000; ++i) {
    const double big = i % 2 == 0 ? 1e14 : 3.0;
    a.push_back(big);
    b.push_back(0.0);
    exact += std::abs(static_cast<long double>(big));
  }
  for (const auto backend : {k::Backend::scalar, k::Backend::avx2}) {
    if (!k::backend_available(backend)) continue;
    k::force_backend(backend);
    const double got = k::sum_abs_diff(a.data(), b.data(), a.size());
    CHECK(close(got, static_cast<double>(exact), 1e-14));
  }
}
