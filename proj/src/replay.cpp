#include "movda/replay.hpp"

#include <cmath>
#include <set>

#include "movda/errors.hpp"

namespace movda {

namespace {

constexpr double kGlickoScale = 173.7178;

double outcome_from_margin(double margin) {
  if (margin > 0.0) return 1.0;
  if (margin < 0.0) return 0.0;
  return 0.5;
}

class EloFamilyModel : public RatingModel {
 public:
  EloFamilyModel(const ModelConfig& cfg,
                 const std::optional<MovdaParams>& params)
      : cfg_(cfg), params_(params) {}

  double win_probability(const std::string& home,
                         const std::string& away) override {
    const double c =
        cfg_.kind == ModelKind::linear_mov ? cfg_.linear_mov.c : cfg_.elo.c;
    return expected_outcome(team(home) - team(away), c);
  }

  double elo_scale_rating(const std::string& id) override { return team(id); }

  void apply_game(const GameRecord& g) override {
    double& rh = team(g.home_team);
    double& ra = team(g.away_team);
    const double margin = g.margin_home();
    const double s_home = outcome_from_margin(margin);
    std::pair<double, double> updated;
    switch (cfg_.kind) {
      case ModelKind::elo:
        updated = elo_update(rh, ra, s_home, cfg_.elo);
        break;
      case ModelKind::movda:
        updated = movda_update(rh, ra, s_home, margin, g.indicator(),
                               cfg_.elo, *params_);
        break;
      default:
        updated = linear_mov_update(rh, ra, s_home, margin, cfg_.linear_mov);
        break;
    }
    rh = updated.first;
    ra = updated.second;
  }

  void reset_to_default() override { book_.clear(); }

  std::vector<std::pair<std::string, double>> ratings() const override {
    return {book_.begin(), book_.end()};
  }

 private:
  double& team(const std::string& id) {
    return book_.try_emplace(id, cfg_.initial_rating).first->second;
  }

  ModelConfig cfg_;
  std::optional<MovdaParams> params_;
  std::map<std::string, double> book_;
};

class Glicko2Model : public RatingModel {
 public:
  explicit Glicko2Model(const ModelConfig& cfg) : cfg_(cfg) {
    default_.rating = cfg.glicko2.initial_rating;
    default_.deviation = cfg.glicko2.initial_rd;
    default_.volatility = cfg.glicko2.initial_volatility;
  }

  double win_probability(const std::string& home,
                         const std::string& away) override {
    return glicko2_win_probability(team(home), team(away));
  }

  double elo_scale_rating(const std::string& id) override {
    return team(id).rating;
  }

  void apply_game(const GameRecord& g) override {
    const double s_home = outcome_from_margin(g.margin_home());
    // each game is its own rating period for both participants
    const Glicko2State home_pre = team(g.home_team);
    const Glicko2State away_pre = team(g.away_team);
    book_[g.home_team] =
        glicko2_update(home_pre, {{away_pre, s_home}}, cfg_.glicko2.tau);
    book_[g.away_team] =
        glicko2_update(away_pre, {{home_pre, 1.0 - s_home}}, cfg_.glicko2.tau);
  }

  void reset_to_default() override { book_.clear(); }

  std::vector<std::pair<std::string, double>> ratings() const override {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(book_.size());
    for (const auto& [id, state] : book_) out.emplace_back(id, state.rating);
    return out;
  }

 private:
  const Glicko2State& team(const std::string& id) {
    return book_.try_emplace(id, default_).first->second;
  }

  ModelConfig cfg_;
  Glicko2State default_;
  std::map<std::string, Glicko2State> book_;
};

class TrueSkillModel : public RatingModel {
 public:
  explicit TrueSkillModel(const ModelConfig& cfg) : cfg_(cfg) {
    default_.mu = cfg.trueskill.mu0;
    default_.sigma = cfg.trueskill.sigma0;
  }

  double win_probability(const std::string& home,
                         const std::string& away) override {
    return trueskill_win_probability(team(home), team(away),
                                     cfg_.trueskill.beta);
  }

  double elo_scale_rating(const std::string& id) override {
    return to_elo(team(id));
  }

  void apply_game(const GameRecord& g) override {
    const double margin = g.margin_home();
    if (margin == 0.0)
      throw data_error("game " + g.game_id +
                       ": trueskill cannot process a drawn game");
    const auto [home_new, away_new] = trueskill_two_team_update(
        team(g.home_team), team(g.away_team),
        margin > 0.0 ? MatchWinner::a : MatchWinner::b, cfg_.trueskill.beta,
        cfg_.trueskill.tau);
    book_[g.home_team] = home_new;
    book_[g.away_team] = away_new;
  }

  void reset_to_default() override { book_.clear(); }

  std::vector<std::pair<std::string, double>> ratings() const override {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(book_.size());
    for (const auto& [id, state] : book_) out.emplace_back(id, to_elo(state));
    return out;
  }

 private:
  double to_elo(const TrueSkillState& s) const {
    return 1500.0 +
           kGlickoScale * (s.mu - cfg_.trueskill.mu0) / cfg_.trueskill.sigma0;
  }

  const TrueSkillState& team(const std::string& id) {
    return book_.try_emplace(id, default_).first->second;
  }

  ModelConfig cfg_;
  TrueSkillState default_;
  std::map<std::string, TrueSkillState> book_;
};

}  // namespace

std::unique_ptr<RatingModel> make_model(
    const ModelConfig& cfg, const std::optional<MovdaParams>& margin_params) {
  cfg.validate();
  switch (cfg.kind) {
    case ModelKind::elo:
    case ModelKind::linear_mov:
      return std::make_unique<EloFamilyModel>(cfg, std::nullopt);
    case ModelKind::movda:
      if (!margin_params)
        throw config_error("movda model requires fitted margin parameters");
      margin_params->validate();
      return std::make_unique<EloFamilyModel>(cfg, margin_params);
    case ModelKind::glicko2:
      return std::make_unique<Glicko2Model>(cfg);
    case ModelKind::trueskill:
      return std::make_unique<TrueSkillModel>(cfg);
  }
  throw config_error("unknown model kind");
}

void SplitSpec::validate() const {
  if (!(train_frac > 0.0) || !(tune_frac > 0.0) || !(holdout_frac > 0.0))
    throw config_error("split fractions must be positive");
  if (std::abs(train_frac + tune_frac + holdout_frac - 1.0) > 1e-9)
    throw config_error("split fractions must sum to 1");
}

DatasetSplits split_dataset(const std::vector<GameRecord>& games,
                            const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = games.size();
  if (n < 10)
    throw insufficient_data_error("need at least 10 games to split, got " +
                                  std::to_string(n));
  const auto n_train =
      static_cast<std::size_t>(std::floor(spec.train_frac * double(n)));
  const auto n_tune =
      static_cast<std::size_t>(std::floor(spec.tune_frac * double(n)));
  DatasetSplits out;
  out.train.assign(games.begin(), games.begin() + n_train);
  out.tune.assign(games.begin() + n_train, games.begin() + n_train + n_tune);
  out.holdout.assign(games.begin() + n_train + n_tune, games.end());
  return out;
}

ReplayResult replay_model(const std::vector<GameRecord>& games,
                          RatingModel& model,
                          const std::optional<MovdaParams>& margin_params) {
  if (margin_params) margin_params->validate();
  ReplayResult res;
  res.log.reserve(games.size());
  std::set<std::string> seen;
  const std::string* prev_date = nullptr;
  for (const auto& g : games) {
    if (g.home_team == g.away_team)
      throw data_error("game " + g.game_id + ": team plays itself");
    if (prev_date != nullptr && g.date < *prev_date)
      throw ordering_error("game " + g.game_id +
                           " breaks chronological order (" + g.date +
                           " after " + *prev_date + ")");
    prev_date = &g.date;
    for (const auto* id : {&g.home_team, &g.away_team})
      if (seen.insert(*id).second) res.teams_initialized.push_back(*id);

    PredictionLogEntry e;
    e.game_id = g.game_id;
    e.pre_rating_home = model.elo_scale_rating(g.home_team);
    e.pre_rating_away = model.elo_scale_rating(g.away_team);
    e.p_home_win = model.win_probability(g.home_team, g.away_team);
    e.i_ha = g.indicator();
    e.actual_margin_home = g.margin_home();
    e.actual_home_win = g.margin_home() > 0.0 ? 1 : 0;
    if (margin_params)
      e.predicted_margin_home = expected_mov(
          e.pre_rating_home - e.pre_rating_away, e.i_ha, *margin_params);
    res.log.push_back(std::move(e));

    model.apply_game(g);
    res.history[g.home_team].push_back(model.elo_scale_rating(g.home_team));
    res.history[g.away_team].push_back(model.elo_scale_rating(g.away_team));
  }
  return res;
}

std::vector<FitSample> collect_fit_samples(
    const std::vector<GameRecord>& games, const EloConfig& cfg,
    double initial_rating) {
  cfg.validate();
  std::map<std::string, double> book;
  const auto team = [&](const std::string& id) -> double& {
    return book.try_emplace(id, initial_rating).first->second;
  };
  std::vector<FitSample> out;
  out.reserve(games.size());
  std::size_t idx = 0;
  for (const auto& g : games) {
    double& rh = team(g.home_team);
    double& ra = team(g.away_team);
    FitSample s;
    if (idx % 2 == 0) {
      s.delta_r = rh - ra;
      s.i_ha = g.indicator();
      s.t_mov = g.margin_home();
    } else {
      // mirrored perspective so away contexts appear in the fit
      s.delta_r = ra - rh;
      s.i_ha = home_indicator_from_int(-static_cast<int>(g.indicator()));
      s.t_mov = -g.margin_home();
    }
    out.push_back(s);
    const auto [nh, na] =
        elo_update(rh, ra, outcome_from_margin(g.margin_home()), cfg);
    rh = nh;
    ra = na;
    ++idx;
  }
  return out;
}

}  // namespace movda
