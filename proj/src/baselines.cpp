#include "movda/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace movda {

namespace {

constexpr double kGlickoScale = 173.7178;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be finite");
}

double normal_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double normal_cdf(double t) { return 0.5 * std::erfc(-t * M_SQRT1_2); }

// Mills ratio Phi(-x)/phi(x) for large x > 0, by the classic continued
// fraction 1/(x + 1/(x + 2/(x + 3/...))). Used where erfc underflows.
double mills_ratio(double x) {
  double f = 0.0;
  for (int k = 60; k >= 1; --k) f = static_cast<double>(k) / (x + f);
  return 1.0 / (x + f);
}

// v(t) = pdf(t) / cdf(t), stable for arbitrarily negative t.
double truncated_gaussian_v(double t) {
  if (t > -8.0) return normal_pdf(t) / normal_cdf(t);
  return 1.0 / mills_ratio(-t);
}

}  // namespace

void LinearMovConfig::validate() const {
  require_finite(k, "k");
  require_finite(c, "c");
  require_finite(c_mov, "c_mov");
  require_finite(k_max, "k_max");
  if (k <= 0.0) throw std::invalid_argument("k must be > 0");
  if (c <= 0.0) throw std::invalid_argument("c must be > 0");
  if (c_mov <= 0.0) throw std::invalid_argument("c_mov must be > 0");
  if (k_max < 1.0) throw std::invalid_argument("k_max must be >= 1");
}

std::pair<double, double> linear_mov_update(double r_a, double r_b,
                                            double s_a, double t_mov,
                                            const LinearMovConfig& cfg) {
  require_finite(r_a, "r_a");
  require_finite(r_b, "r_b");
  require_finite(t_mov, "t_mov");
  cfg.validate();
  if (!(s_a == 0.0 || s_a == 0.5 || s_a == 1.0))
    throw std::invalid_argument("outcome score must be 0, 0.5 or 1");
  const bool consistent = (t_mov > 0.0 && s_a == 1.0) ||
                          (t_mov < 0.0 && s_a == 0.0) ||
                          (t_mov == 0.0 && s_a == 0.5);
  if (!consistent)
    throw data_error("margin/outcome sign mismatch: t_mov=" +
                     std::to_string(t_mov) + ", s_a=" + std::to_string(s_a));
  const double multiplier =
      std::max(1.0, std::min(cfg.k_max, cfg.c_mov * std::abs(t_mov)));
  const double e_a = expected_outcome(r_a - r_b, cfg.c);
  const double change = cfg.k * multiplier * (s_a - e_a);
  return {r_a + change, r_b - change};
}

void Glicko2State::validate() const {
  require_finite(rating, "rating");
  require_finite(deviation, "deviation");
  require_finite(volatility, "volatility");
  if (deviation <= 0.0) throw std::invalid_argument("deviation must be > 0");
  if (volatility <= 0.0)
    throw std::invalid_argument("volatility must be > 0");
}

namespace {

double glicko_g(double phi) {
  return 1.0 / std::sqrt(1.0 + 3.0 * phi * phi / (M_PI * M_PI));
}

}  // namespace

Glicko2State glicko2_update(const Glicko2State& player,
                            const std::vector<Glicko2Opponent>& opponents,
                            double tau) {
  player.validate();
  if (opponents.empty())
    throw std::invalid_argument("glicko2_update needs at least one opponent");
  if (!std::isfinite(tau) || tau <= 0.0)
    throw std::invalid_argument("tau must be finite and > 0");

  const double mu = (player.rating - 1500.0) / kGlickoScale;
  const double phi = player.deviation / kGlickoScale;

  double v_inv = 0.0;
  double delta_sum = 0.0;
  for (const auto& opp : opponents) {
    opp.state.validate();
    if (!(opp.score == 0.0 || opp.score == 0.5 || opp.score == 1.0))
      throw std::invalid_argument("opponent score must be 0, 0.5 or 1");
    const double mu_j = (opp.state.rating - 1500.0) / kGlickoScale;
    const double phi_j = opp.state.deviation / kGlickoScale;
    const double g_j = glicko_g(phi_j);
    const double e_j = 1.0 / (1.0 + std::exp(-g_j * (mu - mu_j)));
    v_inv += g_j * g_j * e_j * (1.0 - e_j);
    delta_sum += g_j * (opp.score - e_j);
  }
  const double v = 1.0 / v_inv;
  const double delta = v * delta_sum;

  // Volatility iteration (Illinois-style bracketing on f).
  const double a = std::log(player.volatility * player.volatility);
  const double phi2 = phi * phi;
  const double d2 = delta * delta;
  const auto f = [&](double x) {
    const double ex = std::exp(x);
    const double num = ex * (d2 - phi2 - v - ex);
    const double den = 2.0 * (phi2 + v + ex) * (phi2 + v + ex);
    return num / den - (x - a) / (tau * tau);
  };
  constexpr double kEps = 1e-6;
  double lo = a;
  double hi;
  if (d2 > phi2 + v) {
    hi = std::log(d2 - phi2 - v);
  } else {
    int k = 1;
    while (f(a - k * tau) < 0.0) {
      ++k;
      if (k > 1000) throw numeric_error("volatility bracketing failed");
    }
    hi = a - k * tau;
  }
  double f_lo = f(lo);
  double f_hi = f(hi);
  int iterations = 0;
  while (std::abs(hi - lo) > kEps) {
    if (++iterations > 100)
      throw numeric_error("volatility iteration did not converge");
    const double mid = lo + (lo - hi) * f_lo / (f_hi - f_lo);
    const double f_mid = f(mid);
    if (f_mid * f_hi <= 0.0) {
      lo = hi;
      f_lo = f_hi;
    } else {
      f_lo /= 2.0;
    }
    hi = mid;
    f_hi = f_mid;
  }
  const double vol_new = std::exp(lo / 2.0);

  const double phi_star = std::sqrt(phi2 + vol_new * vol_new);
  const double phi_new = 1.0 / std::sqrt(1.0 / (phi_star * phi_star) + v_inv);
  const double mu_new = mu + phi_new * phi_new * delta_sum;

  Glicko2State out;
  out.rating = kGlickoScale * mu_new + 1500.0;
  out.deviation = kGlickoScale * phi_new;
  out.volatility = vol_new;
  return out;
}

double glicko2_win_probability(const Glicko2State& a, const Glicko2State& b) {
  a.validate();
  b.validate();
  const double q = std::log(10.0) / 400.0;
  const double rd_comb =
      std::sqrt(a.deviation * a.deviation + b.deviation * b.deviation);
  const double g = 1.0 / std::sqrt(1.0 + 3.0 * (q * rd_comb) * (q * rd_comb) /
                                             (M_PI * M_PI));
  return 1.0 / (1.0 + std::pow(10.0, -g * (a.rating - b.rating) / 400.0));
}

void TrueSkillState::validate() const {
  require_finite(mu, "mu");
  require_finite(sigma, "sigma");
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be > 0");
}

std::pair<TrueSkillState, TrueSkillState> trueskill_two_team_update(
    const TrueSkillState& a, const TrueSkillState& b, MatchWinner winner,
    double beta_ts, double tau_ts) {
  a.validate();
  b.validate();
  require_finite(beta_ts, "beta_ts");
  require_finite(tau_ts, "tau_ts");
  if (beta_ts <= 0.0) throw std::invalid_argument("beta_ts must be > 0");
  if (tau_ts < 0.0) throw std::invalid_argument("tau_ts must be >= 0");

  const TrueSkillState& won = winner == MatchWinner::a ? a : b;
  const TrueSkillState& lost = winner == MatchWinner::a ? b : a;

  const double var_w = won.sigma * won.sigma + tau_ts * tau_ts;
  const double var_l = lost.sigma * lost.sigma + tau_ts * tau_ts;
  const double c2 = 2.0 * beta_ts * beta_ts + var_w + var_l;
  const double c = std::sqrt(c2);
  const double t = (won.mu - lost.mu) / c;
  const double v = truncated_gaussian_v(t);
  const double w = v * (v + t);

  TrueSkillState won_new;
  won_new.mu = won.mu + var_w / c * v;
  won_new.sigma = std::sqrt(var_w * (1.0 - var_w / c2 * w));
  TrueSkillState lost_new;
  lost_new.mu = lost.mu - var_l / c * v;
  lost_new.sigma = std::sqrt(var_l * (1.0 - var_l / c2 * w));
  won_new.validate();
  lost_new.validate();

  if (winner == MatchWinner::a) return {won_new, lost_new};
  return {lost_new, won_new};
}

double trueskill_win_probability(const TrueSkillState& a,
                                 const TrueSkillState& b, double beta_ts) {
  a.validate();
  b.validate();
  if (!std::isfinite(beta_ts) || beta_ts <= 0.0)
    throw std::invalid_argument("beta_ts must be finite and > 0");
  const double c = std::sqrt(2.0 * beta_ts * beta_ts + a.sigma * a.sigma +
                             b.sigma * b.sigma);
  return normal_cdf((a.mu - b.mu) / c);
}

}  // namespace movda
