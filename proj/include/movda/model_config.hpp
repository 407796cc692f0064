#pragma once

#include <string>

#include "movda/baselines.hpp"
#include "movda/ratings.hpp"

namespace movda {

enum class ModelKind { elo, movda, linear_mov, glicko2, trueskill };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct Glicko2Config {
  double tau = 0.5;
  double initial_rating = 1500.0;
  double initial_rd = 350.0;
  double initial_volatility = 0.06;

  void validate() const;
};

struct TrueSkillConfig {
  double mu0 = 25.0;
  double sigma0 = 8.333;
  double beta = 2.0;
  double tau = 0.2;

  void validate() const;
};

// Hyperparameters for every supported rating system; `kind` selects which
// block a replay actually reads.
struct ModelConfig {
  ModelKind kind = ModelKind::elo;
  EloConfig elo;                // also used by movda (k, c, lambda)
  LinearMovConfig linear_mov;
  Glicko2Config glicko2;
  TrueSkillConfig trueskill;
  double initial_rating = 1500.0;  // ELO-family starting rating

  void validate() const;
};

}  // namespace movda
