#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "movda/fitting.hpp"
#include "movda/model_config.hpp"

namespace movda {

struct GameRecord {
  std::string game_id;
  std::string date;  // ISO yyyy-mm-dd; lexicographic order == chronological
  int file_order = 0;  // tie-break within a date
  std::string season;
  std::string home_team;
  std::string away_team;
  double home_score = 0.0;
  double away_score = 0.0;
  bool neutral_site = false;

  double margin_home() const { return home_score - away_score; }
  home_indicator indicator() const {
    return neutral_site ? home_indicator::neutral : home_indicator::home;
  }
};

struct PredictionLogEntry {
  std::string game_id;
  double p_home_win = 0.5;
  // NaN when the replay ran without fitted margin parameters.
  double predicted_margin_home = std::numeric_limits<double>::quiet_NaN();
  int actual_home_win = 0;
  double actual_margin_home = 0.0;
  double pre_rating_home = 0.0;  // ELO scale for every model
  double pre_rating_away = 0.0;
  home_indicator i_ha = home_indicator::home;
};

struct EvalReport {
  double accuracy_pct = 0.0;
  double brier = 0.0;
  double margin_mae = 0.0;
  double convergence_games = 0.0;
  long n_games = 0;
};

struct SplitSpec {
  double train_frac = 0.70;
  double tune_frac = 0.20;
  double holdout_frac = 0.10;

  void validate() const;
};

struct DatasetSplits {
  std::vector<GameRecord> train;
  std::vector<GameRecord> tune;
  std::vector<GameRecord> holdout;
};

// Contiguous chronological prefix/middle/suffix of sizes
// floor(train_frac*n) / floor(tune_frac*n) / remainder.
DatasetSplits split_dataset(const std::vector<GameRecord>& games,
                            const SplitSpec& spec);

// Uniform interface over the five rating systems. Ratings exposed here are
// on the ELO scale for every model (Glicko-2 natively, TrueSkill mu mapped
// affinely) so accuracy, margin evaluation and convergence use one scale.
class RatingModel {
 public:
  virtual ~RatingModel() = default;

  // Pre-match win probability for the home side (ratings only; venue does
  // not enter the probability).
  virtual double win_probability(const std::string& home,
                                 const std::string& away) = 0;
  virtual double elo_scale_rating(const std::string& team) = 0;
  virtual void apply_game(const GameRecord& game) = 0;
  // Forget all learned state, as if every team were new.
  virtual void reset_to_default() = 0;
  // (team, elo-scale rating) for every team seen so far, sorted by id.
  virtual std::vector<std::pair<std::string, double>> ratings() const = 0;
};

// margin_params: required for ModelKind::movda.
std::unique_ptr<RatingModel> make_model(
    const ModelConfig& cfg,
    const std::optional<MovdaParams>& margin_params = std::nullopt);

struct ReplayResult {
  std::vector<PredictionLogEntry> log;
  // Post-game ELO-scale rating series per team, one entry per game played.
  std::map<std::string, std::vector<double>> history;
  // Teams first seen (and default-initialized) during this replay.
  std::vector<std::string> teams_initialized;
};

// Chronological game-by-game replay: one prediction from strictly pre-match
// state, then the model update. Throws ordering_error if dates decrease.
// margin_params fills predicted_margin_home when present.
ReplayResult replay_model(
    const std::vector<GameRecord>& games, RatingModel& model,
    const std::optional<MovdaParams>& margin_params = std::nullopt);

// Pre-match rating differences, venue context and observed margin from a
// plain ELO replay; the reference perspective alternates home/away per
// game so both venue contexts appear in the fit.
std::vector<FitSample> collect_fit_samples(
    const std::vector<GameRecord>& games, const EloConfig& cfg,
    double initial_rating = 1500.0);

// --- evaluation metrics ---

// Percentage of games won by the higher pre-rated team; exact rating ties
// earn half credit.
double accuracy(const std::vector<PredictionLogEntry>& log);
// Mean of (p_home_win - outcome)^2.
double brier(const std::vector<PredictionLogEntry>& log);
// Mean |actual margin - expected_mov(pre rating diff, venue, p)|.
double margin_mae(const std::vector<PredictionLogEntry>& log,
                  const MovdaParams& p);

// Mean over teams of the first (1-based) game index from which the team's
// rating stays within +/-band of its stable target (the mean of its final
// stable_window ratings). Teams with fewer than stable_window games are
// excluded with a warning; a team whose series never settles contributes
// length+1.
double convergence_speed(
    const std::map<std::string, std::vector<double>>& history,
    double band = 20.0, std::size_t stable_window = 200);

// --- synthetic league ---

struct StepChange {
  int team_index = 0;
  long at_game = 0;      // league game index (0-based) from which it applies
  double skill_delta = 0.0;
};

struct LeagueSpec {
  int n_teams = 8;
  long n_games = 1000;
  MovdaParams params;          // sigma2 is the margin noise variance
  std::vector<double> skills;  // latent skills in rating points, per team
  std::optional<StepChange> step;
  std::uint64_t seed = 1;
};

// Round-robin schedule with alternating home assignment; each margin is
// drawn from Normal(expected_mov(skill diff, venue, params), sigma2), with
// exact zeros redrawn. Deterministic for a given seed.
std::vector<GameRecord> simulate_league(const LeagueSpec& spec);

}  // namespace movda
