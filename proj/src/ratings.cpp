#include "movda/ratings.hpp"

#include <cmath>
#include <string>

namespace movda {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be finite");
}

void require_score(double s) {
  if (!(s == 0.0 || s == 0.5 || s == 1.0))
    throw std::invalid_argument("outcome score must be 0, 0.5 or 1");
}

}  // namespace

home_indicator home_indicator_from_int(int value) {
  if (value < -1 || value > 1)
    throw std::invalid_argument("home indicator must be -1, 0 or +1");
  return static_cast<home_indicator>(value);
}

void MovdaParams::validate() const {
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  require_finite(delta, "delta");
  require_finite(sigma2, "sigma2");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
  if (beta <= 0.0) throw std::invalid_argument("beta must be > 0");
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be >= 0");
}

void EloConfig::validate() const {
  require_finite(k, "k");
  require_finite(c, "c");
  require_finite(lambda, "lambda");
  if (k <= 0.0) throw std::invalid_argument("k must be > 0");
  if (c <= 0.0) throw std::invalid_argument("c must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
}

double expected_outcome(double delta_r, double c) {
  require_finite(delta_r, "delta_r");
  if (!std::isfinite(c) || c <= 0.0)
    throw std::invalid_argument("c must be finite and > 0");
  return 1.0 / (1.0 + std::pow(10.0, -delta_r / c));
}

std::pair<double, double> elo_update(double r_a, double r_b, double s_a,
                                     const EloConfig& cfg) {
  require_finite(r_a, "r_a");
  require_finite(r_b, "r_b");
  require_score(s_a);
  cfg.validate();
  const double e_a = expected_outcome(r_a - r_b, cfg.c);
  const double change = cfg.k * (s_a - e_a);
  return {r_a + change, r_b - change};
}

double expected_mov(double delta_r, home_indicator i_ha,
                    const MovdaParams& p) {
  require_finite(delta_r, "delta_r");
  p.validate();
  return p.alpha * std::tanh(p.beta * delta_r) + p.gamma +
         p.delta * to_double(i_ha);
}

double mov_differential(double t_mov, double e_mov) {
  require_finite(t_mov, "t_mov");
  require_finite(e_mov, "e_mov");
  return t_mov - e_mov;
}

std::pair<double, double> movda_update(double r_a, double r_b, double s_a,
                                       double t_mov, home_indicator i_ha,
                                       const EloConfig& cfg,
                                       const MovdaParams& p) {
  require_finite(r_a, "r_a");
  require_finite(r_b, "r_b");
  require_finite(t_mov, "t_mov");
  require_score(s_a);
  cfg.validate();
  p.validate();
  const bool consistent = (t_mov > 0.0 && s_a == 1.0) ||
                          (t_mov < 0.0 && s_a == 0.0) ||
                          (t_mov == 0.0 && s_a == 0.5);
  if (!consistent)
    throw data_error("margin/outcome sign mismatch: t_mov=" +
                     std::to_string(t_mov) + ", s_a=" + std::to_string(s_a));

  // Same operation order as the single-game update procedure so that
  // lambda = 0 reproduces elo_update bit for bit.
  const double delta_r = r_a - r_b;
  const double e_a = expected_outcome(delta_r, cfg.c);
  const double e_mov = expected_mov(delta_r, i_ha, p);
  const double d_mov = mov_differential(t_mov, e_mov);
  const double change = cfg.k * (s_a - e_a) + cfg.lambda * d_mov;
  return {r_a + change, r_b - change};
}

}  // namespace movda
