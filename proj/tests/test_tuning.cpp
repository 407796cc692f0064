#include <cmath>

#include "doctest.h"
#include "movda/errors.hpp"
#include "movda/tuning.hpp"

using namespace movda;

namespace {

struct Fixture {
  std::vector<GameRecord> train, tune;
  MovdaParams params;
};

Fixture make_fixture(std::uint64_t seed, long games = 2000) {
  LeagueSpec spec;
  spec.n_teams = 8;
  spec.n_games = games;
  spec.seed = seed;
  spec.params.alpha = 12.0;
  spec.params.beta = 0.004;
  spec.params.gamma = 0.0;
  spec.params.delta = 3.0;
  spec.params.sigma2 = 121.0;
  for (int i = 0; i < 8; ++i)
    spec.skills.push_back(1300.0 + 400.0 * i / 7.0);
  const auto league = simulate_league(spec);
  const DatasetSplits splits = split_dataset(league, SplitSpec{});

  Fixture f;
  f.train = splits.train;
  f.tune = splits.tune;
  const auto samples = collect_fit_samples(f.train, EloConfig{});
  f.params = fit_emov(samples).params;
  return f;
}

}  // namespace

TEST_CASE("single-point grid returns that configuration") {
  const Fixture f = make_fixture(1, 600);
  ModelConfig base;
  base.kind = ModelKind::elo;
  GridSpec grid;
  grid.k = {25.0};
  const TuneResult r =
      grid_search(base, grid, f.train, f.tune, std::nullopt);
  CHECK_EQ(r.table.size(), 1);
  CHECK_EQ(r.best_config.elo.k, 25.0);
  CHECK_EQ(r.best_brier, r.table[0].brier);
}

TEST_CASE("grid expansion is exhaustive and ties go to the first tuple") {
  const Fixture f = make_fixture(2, 600);
  ModelConfig base;
  base.kind = ModelKind::movda;
  GridSpec grid;
  grid.k = {15.0, 20.0};
  grid.lambda = {0.5, 0.5, 1.0};  // duplicated point forces a brier tie
  const TuneResult r = grid_search(base, grid, f.train, f.tune, f.params);
  CHECK_EQ(r.table.size(), 6);
  CHECK_EQ(r.table[0].values, std::vector<double>{15.0, 0.5});
  CHECK_EQ(r.table[1].values, std::vector<double>{15.0, 0.5});
  CHECK_EQ(r.table[0].brier, r.table[1].brier);
  // whatever wins, an equal-brier later duplicate must not displace it
  for (std::size_t i = 0; i < r.table.size(); ++i) {
    if (r.table[i].brier == r.best_brier) {
      CHECK_EQ(r.table[i].config.elo.k, r.best_config.elo.k);
      CHECK_EQ(r.table[i].config.elo.lambda, r.best_config.elo.lambda);
      break;
    }
  }
}

TEST_CASE("margin-informative league tunes to a positive lambda") {
  const Fixture f = make_fixture(3, 4000);
  ModelConfig base;
  base.kind = ModelKind::movda;
  GridSpec grid;
  grid.k = {20.0};
  grid.lambda = {0.0, 0.2, 0.5, 1.0};
  const TuneResult r = grid_search(base, grid, f.train, f.tune, f.params);
  CHECK(r.best_config.elo.lambda > 0.0);
  // exhaustive table contains the lambda = 0 control point with worse brier
  CHECK(r.table[0].brier >= r.best_brier);
}

TEST_CASE("best brier is reproducible by an independent replay") {
  const Fixture f = make_fixture(4, 1500);
  ModelConfig base;
  base.kind = ModelKind::movda;
  GridSpec grid;
  grid.k = {15.0, 20.0};
  grid.lambda = {0.0, 0.5};
  const TuneResult r = grid_search(base, grid, f.train, f.tune, f.params);
  auto model = make_model(r.best_config, f.params);
  replay_model(f.train, *model);
  const ReplayResult run = replay_model(f.tune, *model);
  CHECK_EQ(brier(run.log), r.best_brier);
}

TEST_CASE("parallel search returns the identical table") {
  const Fixture f = make_fixture(5, 1200);
  ModelConfig base;
  base.kind = ModelKind::movda;
  GridSpec grid;
  grid.k = {15.0, 20.0, 25.0};
  grid.lambda = {0.0, 0.3, 0.7, 1.2};
  const TuneResult seq = grid_search(base, grid, f.train, f.tune, f.params, 1);
  const TuneResult par = grid_search(base, grid, f.train, f.tune, f.params, 4);
  REQUIRE_EQ(seq.table.size(), par.table.size());
  for (std::size_t i = 0; i < seq.table.size(); ++i) {
    CHECK_EQ(seq.table[i].brier, par.table[i].brier);
    CHECK_EQ(seq.table[i].values, par.table[i].values);
  }
  CHECK_EQ(seq.best_brier, par.best_brier);
}

TEST_CASE("grid search input validation") {
  const Fixture f = make_fixture(6, 600);
  ModelConfig base;
  base.kind = ModelKind::elo;
  GridSpec empty;
  empty.k = {};
  CHECK_THROWS_AS(grid_search(base, empty, f.train, f.tune, std::nullopt),
                  config_error);
  GridSpec unsorted;
  unsorted.k = {20.0, 10.0};
  CHECK_THROWS_AS(grid_search(base, unsorted, f.train, f.tune, std::nullopt),
                  config_error);
  GridSpec ok;
  ok.k = {20.0};
  CHECK_THROWS_AS(grid_search(base, ok, f.train, {}, std::nullopt),
                  insufficient_data_error);
}

TEST_CASE("default grids cover the documented ranges") {
  const GridSpec movda = GridSpec::defaults_for(ModelKind::movda);
  CHECK_EQ(movda.lambda.size(), 31);  // 0.0 control plus 0.1 .. 3.0
  CHECK_EQ(movda.lambda.front(), 0.0);
  CHECK(std::abs(movda.lambda.back() - 3.0) < 1e-12);
  CHECK_EQ(GridSpec::defaults_for(ModelKind::elo).k.size(), 5);
  CHECK_FALSE(GridSpec::defaults_for(ModelKind::glicko2).tau.empty());
  CHECK_FALSE(GridSpec::defaults_for(ModelKind::trueskill).ts_tau.empty());
}
