#pragma once

#include <optional>
#include <string>
#include <vector>

#include "movda/replay.hpp"

namespace movda {

// Candidate lists per hyperparameter. Which lists a search reads depends on
// the model kind; every list that is read must be non-empty and sorted
// ascending.
struct GridSpec {
  std::vector<double> k;        // ELO family K-factor
  std::vector<double> lambda;   // movda margin-differential weight
  std::vector<double> c_mov;    // linear-mov multiplier slope
  std::vector<double> k_max;    // linear-mov multiplier cap
  std::vector<double> tau;      // glicko2 volatility constraint
  std::vector<double> ts_tau;   // trueskill dynamics noise

  static GridSpec defaults_for(ModelKind kind);
};

struct TuneEntry {
  ModelConfig config;
  std::vector<double> values;  // grid coordinates, in expansion order
  double brier = 0.0;
};

struct TuneResult {
  ModelConfig best_config;
  double best_brier = 0.0;
  std::vector<TuneEntry> table;  // exhaustive, in grid order
};

// Exhaustive grid search optimizing tune-split Brier. Every grid point
// replays the train split to warm the ratings (no reset) and scores the
// tune split. Ties go to the earliest grid point, i.e. the
// lexicographically smallest value tuple. With threads > 1 grid points
// evaluate concurrently; the result table is identical to a sequential run.
TuneResult grid_search(const ModelConfig& base, const GridSpec& grid,
                       const std::vector<GameRecord>& train_games,
                       const std::vector<GameRecord>& tune_games,
                       const std::optional<MovdaParams>& margin_params,
                       int threads = 1);

}  // namespace movda
