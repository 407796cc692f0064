#pragma once

#include <utility>

#include "movda/errors.hpp"

namespace movda {

// Venue context for the reference competitor (competitor A).
enum class home_indicator : int { away = -1, neutral = 0, home = +1 };

inline double to_double(home_indicator i) { return static_cast<double>(static_cast<int>(i)); }

home_indicator home_indicator_from_int(int value);

// Parameters of the expected-margin model
//   E_MOV(dr, i) = alpha * tanh(beta * dr) + gamma + delta * i
// plus the residual margin variance sigma2 estimated alongside them.
struct MovdaParams {
  double alpha = 10.0;   // asymptotic skill-based margin, points
  double beta = 0.005;   // steepness per rating point
  double gamma = 0.0;    // baseline margin offset, points
  double delta = 3.0;    // home-advantage magnitude, points
  double sigma2 = 0.0;   // residual margin variance, points^2

  void validate() const;
};

struct EloConfig {
  double k = 20.0;      // max rating change from the outcome term
  double c = 400.0;     // logistic scale
  double lambda = 0.0;  // margin-differential weight; 0 = plain ELO

  void validate() const;
};

// Win probability for A given the rating difference dr = R_A - R_B:
// 1 / (1 + 10^(-dr / c)).
double expected_outcome(double delta_r, double c);

// Classic zero-sum ELO update. s_a in {0, 0.5, 1}. Returns (R'_A, R'_B).
std::pair<double, double> elo_update(double r_a, double r_b, double s_a,
                                     const EloConfig& cfg);

// Expected margin of victory for A.
double expected_mov(double delta_r, home_indicator i_ha, const MovdaParams& p);

// Observed minus expected margin: the part of the result the ratings did
// not explain.
double mov_differential(double t_mov, double e_mov);

// Margin-aware rating update. The outcome term K*(s_a - E_A) is augmented
// with lambda * (t_mov - E_MOV); the combined change is applied with
// opposite signs so the pair sum is conserved.
// Requires sign consistency: t_mov > 0 iff s_a == 1, t_mov < 0 iff
// s_a == 0, t_mov == 0 only with s_a == 0.5.
std::pair<double, double> movda_update(double r_a, double r_b, double s_a,
                                       double t_mov, home_indicator i_ha,
                                       const EloConfig& cfg,
                                       const MovdaParams& p);

}  // namespace movda
