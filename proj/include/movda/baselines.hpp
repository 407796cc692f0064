#pragma once

#include <utility>
#include <vector>

#include "movda/ratings.hpp"

namespace movda {

// ELO with the K-factor scaled linearly by the absolute observed margin,
// capped: K' = K * max(1, min(k_max, c_mov * |t_mov|)).
struct LinearMovConfig {
  double k = 20.0;
  double c = 400.0;
  double c_mov = 0.1;  // multiplier per margin point
  double k_max = 2.0;  // cap on the multiplier

  void validate() const;
};

std::pair<double, double> linear_mov_update(double r_a, double r_b,
                                            double s_a, double t_mov,
                                            const LinearMovConfig& cfg);

struct Glicko2State {
  double rating = 1500.0;
  double deviation = 350.0;
  double volatility = 0.06;

  void validate() const;
};

struct Glicko2Opponent {
  Glicko2State state;
  double score = 0.0;  // 0, 0.5 or 1 from the player's perspective
};

// One rating period of the standard Glicko-2 procedure
// (http://www.glicko.net/glicko/glicko2.pdf): scale conversion, variance v,
// improvement delta, volatility iteration to 1e-6, deviation and rating
// update, conversion back.
Glicko2State glicko2_update(const Glicko2State& player,
                            const std::vector<Glicko2Opponent>& opponents,
                            double tau);

// Expected score for a against b under the Glicko logistic with the
// combined-deviation attenuation g(sqrt(RD_a^2 + RD_b^2)).
double glicko2_win_probability(const Glicko2State& a, const Glicko2State& b);

struct TrueSkillState {
  double mu = 25.0;
  double sigma = 8.333;

  void validate() const;
};

enum class MatchWinner { a, b };

// Two-team TrueSkill update in closed form (no draws). Dynamics noise
// tau_ts is added to both sigmas before the update.
std::pair<TrueSkillState, TrueSkillState> trueskill_two_team_update(
    const TrueSkillState& a, const TrueSkillState& b, MatchWinner winner,
    double beta_ts, double tau_ts);

// P(a beats b) = Phi((mu_a - mu_b) / sqrt(2*beta^2 + sigma_a^2 + sigma_b^2))
double trueskill_win_probability(const TrueSkillState& a,
                                 const TrueSkillState& b, double beta_ts);

}  // namespace movda
