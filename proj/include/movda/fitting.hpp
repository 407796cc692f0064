#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "movda/ratings.hpp"

namespace movda {

// One historical observation for the expected-margin fit.
struct FitSample {
  double delta_r = 0.0;                         // pre-match rating difference
  home_indicator i_ha = home_indicator::home;   // venue context
  double t_mov = 0.0;                           // observed margin
};

struct FitOptions {
  int max_iter = 200;
  // Convergence requires max|J^T r| / n <= grad_tol * max(1, SSE/n), with
  // the gradient taken in the optimizer's (log alpha, log beta, gamma,
  // delta) space. The SSE factor keeps the criterion attainable on noisy
  // data, where the objective is flat to roughly eps * SSE.
  double grad_tol = 1e-8;
  std::optional<MovdaParams> initial_guess;
};

struct FitReport {
  MovdaParams params;      // sigma2 = SSE / (n - 4)
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;  // final max|J^T r| / n
  std::size_t n = 0;
};

// Least-squares fit of (alpha, beta, gamma, delta) by Levenberg-Marquardt
// with the analytic Jacobian. alpha and beta are optimized as logs to keep
// them positive. Damping starts at 1e-3, x10 on a rejected step, x0.1 on
// an accepted one; accepted steps never increase the SSE.
//
// Throws insufficient_data_error for n < 4, unidentifiable_error("beta")
// when every delta_r is identical, unidentifiable_error("delta") when the
// venue indicator never varies. An exhausted iteration budget reports
// converged = false rather than throwing.
FitReport fit_emov(const std::vector<FitSample>& samples,
                   const FitOptions& options = {});

// (dE/dalpha, dE/dbeta, dE/dgamma, dE/ddelta)
//   = (tanh(b*dr), a*dr*sech^2(b*dr), 1, i_ha)
std::array<double, 4> emov_jacobian(const FitSample& sample,
                                    const MovdaParams& p);

}  // namespace movda
