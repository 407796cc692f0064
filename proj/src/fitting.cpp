#include "movda/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels/scalar_math.hpp"
#include "movda/errors.hpp"
#include "movda/kernels.hpp"

namespace movda {

namespace {

struct SampleArrays {
  std::vector<double> dr, ih, tm;
};

SampleArrays to_arrays(const std::vector<FitSample>& samples) {
  SampleArrays a;
  a.dr.reserve(samples.size());
  a.ih.reserve(samples.size());
  a.tm.reserve(samples.size());
  for (const auto& s : samples) {
    if (!std::isfinite(s.delta_r) || !std::isfinite(s.t_mov))
      throw std::invalid_argument("fit sample values must be finite");
    a.dr.push_back(s.delta_r);
    a.ih.push_back(to_double(s.i_ha));
    a.tm.push_back(s.t_mov);
  }
  return a;
}

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

// Moment-matching start: delta from the venue/margin covariance, gamma
// from the adjusted mean, alpha from a high quantile of adjusted margins,
// beta from the rating-difference spread.
MovdaParams initial_guess(const SampleArrays& a) {
  const std::size_t n = a.dr.size();
  double mean_ih = 0.0, mean_tm = 0.0, mean_dr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_ih += a.ih[i];
    mean_tm += a.tm[i];
    mean_dr += a.dr[i];
  }
  mean_ih /= static_cast<double>(n);
  mean_tm /= static_cast<double>(n);
  mean_dr /= static_cast<double>(n);

  double cov = 0.0, var_ih = 0.0, var_dr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a.ih[i] - mean_ih) * (a.tm[i] - mean_tm);
    var_ih += (a.ih[i] - mean_ih) * (a.ih[i] - mean_ih);
    var_dr += (a.dr[i] - mean_dr) * (a.dr[i] - mean_dr);
  }
  const double delta0 = cov / var_ih;
  const double gamma0 = mean_tm - delta0 * mean_ih;

  std::vector<double> adjusted(n);
  for (std::size_t i = 0; i < n; ++i)
    adjusted[i] = std::abs(a.tm[i] - gamma0 - delta0 * a.ih[i]);
  const double alpha0 =
      std::max(0.9 * percentile(std::move(adjusted), 0.95), 1e-3);
  const double sd_dr = std::sqrt(var_dr / static_cast<double>(n - 1));
  const double beta0 = 1.0 / (2.0 * sd_dr);

  MovdaParams p;
  p.alpha = alpha0;
  p.beta = beta0;
  p.gamma = gamma0;
  p.delta = delta0;
  p.sigma2 = 0.0;
  return p;
}

// Internal optimization coordinates: (log alpha, log beta, gamma, delta).
struct InternalPoint {
  std::array<double, 4> u;

  static InternalPoint from_params(const MovdaParams& p) {
    return {{std::log(p.alpha), std::log(p.beta), p.gamma, p.delta}};
  }
  MovdaParams to_params() const {
    MovdaParams p;
    p.alpha = std::exp(u[0]);
    p.beta = std::exp(u[1]);
    p.gamma = u[2];
    p.delta = u[3];
    p.sigma2 = 0.0;
    return p;
  }
  bool valid() const {
    // exp() must stay finite and positive
    return std::abs(u[0]) < 300.0 && std::abs(u[1]) < 300.0 &&
           std::isfinite(u[2]) && std::isfinite(u[3]);
  }
};

// Chain rule from (alpha, beta, gamma, delta) space to the internal
// coordinates: J_int = J_ext * diag(alpha, beta, 1, 1).
void to_internal(const kernels::NormalEq& ext, const MovdaParams& p,
                 double jtj[4][4], double jtr[4]) {
  const double d[4] = {p.alpha, p.beta, 1.0, 1.0};
  const int idx[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  for (int r = 0; r < 4; ++r) {
    jtr[r] = d[r] * ext.jtr[r];
    for (int c = 0; c < 4; ++c) jtj[r][c] = d[r] * d[c] * ext.jtj[idx[r][c]];
  }
}

bool solve_damped(const double jtj[4][4], const double jtr[4], double mu,
                  double step[4]) {
  double m[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = jtj[r][c];
  for (int r = 0; r < 4; ++r) m[r][r] += mu * jtj[r][r];

  // Cholesky m = L L^T
  double l[4][4] = {};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c <= r; ++c) {
      double s = m[r][c];
      for (int k = 0; k < c; ++k) s -= l[r][k] * l[c][k];
      if (r == c) {
        if (!(s > 0.0)) return false;
        l[r][r] = std::sqrt(s);
      } else {
        l[r][c] = s / l[c][c];
      }
    }
  }
  double y[4];
  for (int r = 0; r < 4; ++r) {
    double s = jtr[r];
    for (int k = 0; k < r; ++k) s -= l[r][k] * y[k];
    y[r] = s / l[r][r];
  }
  for (int r = 3; r >= 0; --r) {
    double s = y[r];
    for (int k = r + 1; k < 4; ++k) s -= l[k][r] * step[k];
    step[r] = s / l[r][r];
  }
  return std::isfinite(step[0]) && std::isfinite(step[1]) &&
         std::isfinite(step[2]) && std::isfinite(step[3]);
}

double grad_inf_norm(const double jtr[4], std::size_t n) {
  double g = 0.0;
  for (int i = 0; i < 4; ++i) g = std::max(g, std::abs(jtr[i]));
  return g / static_cast<double>(n);
}

}  // namespace

std::array<double, 4> emov_jacobian(const FitSample& sample,
                                    const MovdaParams& p) {
  p.validate();
  if (!std::isfinite(sample.delta_r))
    throw std::invalid_argument("delta_r must be finite");
  double th, s2;
  kernels::detail::tanh_sech2(p.beta * sample.delta_r, &th, &s2);
  return {th, p.alpha * sample.delta_r * s2, 1.0, to_double(sample.i_ha)};
}

FitReport fit_emov(const std::vector<FitSample>& samples,
                   const FitOptions& options) {
  const std::size_t n = samples.size();
  if (n < 4)
    throw insufficient_data_error(
        "need at least 4 samples to fit 4 parameters, got " +
        std::to_string(n));
  const SampleArrays arrays = to_arrays(samples);

  const auto [dr_min, dr_max] =
      std::minmax_element(arrays.dr.begin(), arrays.dr.end());
  if (*dr_min == *dr_max)
    throw unidentifiable_error(
        "beta", "all delta_r values are identical; beta is unidentifiable");
  const auto [ih_min, ih_max] =
      std::minmax_element(arrays.ih.begin(), arrays.ih.end());
  if (*ih_min == *ih_max)
    throw unidentifiable_error(
        "delta",
        "venue indicator never varies; delta is unidentifiable");

  MovdaParams start;
  if (options.initial_guess) {
    start = *options.initial_guess;
    start.validate();
  } else {
    start = initial_guess(arrays);
  }

  InternalPoint u = InternalPoint::from_params(start);
  MovdaParams current = u.to_params();
  kernels::NormalEq eq = kernels::fit_accumulate(
      arrays.dr.data(), arrays.ih.data(), arrays.tm.data(), n, current);

  double mu = 1e-3;
  FitReport report;
  report.n = n;

  const auto grad_threshold = [&](double sse) {
    return options.grad_tol * std::max(1.0, sse / static_cast<double>(n));
  };

  double jtj[4][4], jtr[4];
  for (int iter = 0; iter < options.max_iter; ++iter) {
    to_internal(eq, current, jtj, jtr);
    report.grad_norm = grad_inf_norm(jtr, n);
    if (report.grad_norm <= grad_threshold(eq.sse)) {
      report.converged = true;
      break;
    }
    report.iterations = iter + 1;

    double step[4];
    if (!solve_damped(jtj, jtr, mu, step)) {
      mu *= 10.0;
      if (mu > 1e14) break;
      continue;
    }
    InternalPoint trial = u;
    for (int i = 0; i < 4; ++i) trial.u[i] += step[i];
    if (!trial.valid()) {
      mu *= 10.0;
      if (mu > 1e14) break;
      continue;
    }
    const MovdaParams trial_params = trial.to_params();
    const kernels::NormalEq trial_eq =
        kernels::fit_accumulate(arrays.dr.data(), arrays.ih.data(),
                                arrays.tm.data(), n, trial_params);
    if (trial_eq.sse < eq.sse) {
      u = trial;
      current = trial_params;
      eq = trial_eq;
      mu *= 0.1;
    } else {
      mu *= 10.0;
      if (mu > 1e14) break;
    }
  }

  if (!report.converged) {
    // final gradient at the accepted point
    to_internal(eq, current, jtj, jtr);
    report.grad_norm = grad_inf_norm(jtr, n);
    report.converged = report.grad_norm <= grad_threshold(eq.sse);
  }
  report.params = current;
  report.sse = eq.sse;
  report.params.sigma2 =
      n > 4 ? eq.sse / static_cast<double>(n - 4) : 0.0;
  return report;
}

}  // namespace movda
