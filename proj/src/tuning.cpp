#include "movda/tuning.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "movda/errors.hpp"

namespace movda {

namespace {

struct GridAxis {
  const char* name;
  const std::vector<double>* values;
  std::function<void(ModelConfig&, double)> apply;
};

std::vector<GridAxis> axes_for(const ModelConfig& base, const GridSpec& grid) {
  switch (base.kind) {
    case ModelKind::elo:
      return {{"k", &grid.k, [](ModelConfig& c, double v) { c.elo.k = v; }}};
    case ModelKind::movda:
      return {{"k", &grid.k, [](ModelConfig& c, double v) { c.elo.k = v; }},
              {"lambda", &grid.lambda,
               [](ModelConfig& c, double v) { c.elo.lambda = v; }}};
    case ModelKind::linear_mov:
      return {{"k", &grid.k,
               [](ModelConfig& c, double v) { c.linear_mov.k = v; }},
              {"c_mov", &grid.c_mov,
               [](ModelConfig& c, double v) { c.linear_mov.c_mov = v; }},
              {"k_max", &grid.k_max,
               [](ModelConfig& c, double v) { c.linear_mov.k_max = v; }}};
    case ModelKind::glicko2:
      return {{"tau", &grid.tau,
               [](ModelConfig& c, double v) { c.glicko2.tau = v; }}};
    case ModelKind::trueskill:
      return {{"ts_tau", &grid.ts_tau,
               [](ModelConfig& c, double v) { c.trueskill.tau = v; }}};
  }
  throw config_error("unknown model kind");
}

}  // namespace

GridSpec GridSpec::defaults_for(ModelKind kind) {
  GridSpec g;
  switch (kind) {
    case ModelKind::elo:
      g.k = {10, 15, 20, 25, 30};
      break;
    case ModelKind::movda:
      g.k = {10, 15, 20, 25, 30};
      g.lambda = {0.0};  // control point, then 0.1 .. 3.0
      for (int i = 1; i <= 30; ++i)
        g.lambda.push_back(static_cast<double>(i) / 10.0);
      break;
    case ModelKind::linear_mov:
      g.k = {10, 15, 20, 25, 30};
      g.c_mov = {0.05, 0.1, 0.2};
      g.k_max = {1.5, 2.0, 3.0};
      break;
    case ModelKind::glicko2:
      g.tau = {0.2, 0.3, 0.5, 0.75, 1.0};
      break;
    case ModelKind::trueskill:
      g.ts_tau = {0.05, 0.1, 0.2, 0.3, 0.5};
      break;
  }
  return g;
}

TuneResult grid_search(const ModelConfig& base, const GridSpec& grid,
                       const std::vector<GameRecord>& train_games,
                       const std::vector<GameRecord>& tune_games,
                       const std::optional<MovdaParams>& margin_params,
                       int threads) {
  base.validate();
  if (tune_games.empty())
    throw insufficient_data_error("tuning split is empty");

  const auto axes = axes_for(base, grid);
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.values->empty())
      throw config_error(std::string("empty grid for ") + axis.name);
    if (!std::is_sorted(axis.values->begin(), axis.values->end()))
      throw config_error(std::string("grid for ") + axis.name +
                         " must be sorted ascending");
    total *= axis.values->size();
  }

  // expand in lexicographic order (last axis fastest)
  std::vector<TuneEntry> table(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    TuneEntry entry;
    entry.config = base;
    std::size_t rem = idx;
    entry.values.resize(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& vals = *axes[a].values;
      const double v = vals[rem % vals.size()];
      rem /= vals.size();
      entry.values[a] = v;
      axes[a].apply(entry.config, v);
    }
    table[idx] = std::move(entry);
  }

  const auto evaluate = [&](TuneEntry& entry) {
    auto model = make_model(entry.config, margin_params);
    replay_model(train_games, *model);  // warm ratings, log discarded
    const ReplayResult tune_run = replay_model(tune_games, *model);
    entry.brier = brier(tune_run.log);
  };

  if (threads <= 1 || total == 1) {
    for (auto& entry : table) evaluate(entry);
  } else {
    const int n_threads = std::min<std::size_t>(threads, total);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t idx = t; idx < total; idx += n_threads)
          evaluate(table[idx]);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t idx = 1; idx < total; ++idx)
    if (table[idx].brier < table[best].brier) best = idx;

  TuneResult result;
  result.best_config = table[best].config;
  result.best_brier = table[best].brier;
  result.table = std::move(table);
  return result;
}

}  // namespace movda
