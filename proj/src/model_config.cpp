#include "movda/model_config.hpp"

#include <cmath>

#include "movda/errors.hpp"

namespace movda {

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::elo: return "elo";
    case ModelKind::movda: return "movda";
    case ModelKind::linear_mov: return "linear-mov";
    case ModelKind::glicko2: return "glicko2";
    case ModelKind::trueskill: return "trueskill";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "elo") return ModelKind::elo;
  if (name == "movda") return ModelKind::movda;
  if (name == "linear-mov" || name == "linear_mov")
    return ModelKind::linear_mov;
  if (name == "glicko2") return ModelKind::glicko2;
  if (name == "trueskill") return ModelKind::trueskill;
  throw config_error("unknown model: " + name);
}

void Glicko2Config::validate() const {
  if (!std::isfinite(tau) || tau <= 0.0)
    throw std::invalid_argument("glicko2 tau must be > 0");
  if (!std::isfinite(initial_rating))
    throw std::invalid_argument("glicko2 initial rating must be finite");
  if (!std::isfinite(initial_rd) || initial_rd <= 0.0)
    throw std::invalid_argument("glicko2 initial RD must be > 0");
  if (!std::isfinite(initial_volatility) || initial_volatility <= 0.0)
    throw std::invalid_argument("glicko2 initial volatility must be > 0");
}

void TrueSkillConfig::validate() const {
  if (!std::isfinite(mu0))
    throw std::invalid_argument("trueskill mu0 must be finite");
  if (!std::isfinite(sigma0) || sigma0 <= 0.0)
    throw std::invalid_argument("trueskill sigma0 must be > 0");
  if (!std::isfinite(beta) || beta <= 0.0)
    throw std::invalid_argument("trueskill beta must be > 0");
  if (!std::isfinite(tau) || tau < 0.0)
    throw std::invalid_argument("trueskill tau must be >= 0");
}

void ModelConfig::validate() const {
  if (!std::isfinite(initial_rating))
    throw std::invalid_argument("initial rating must be finite");
  switch (kind) {
    case ModelKind::elo:
    case ModelKind::movda:
      elo.validate();
      break;
    case ModelKind::linear_mov:
      linear_mov.validate();
      break;
    case ModelKind::glicko2:
      glicko2.validate();
      break;
    case ModelKind::trueskill:
      trueskill.validate();
      break;
  }
}

}  // namespace movda
