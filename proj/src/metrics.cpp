#include <cmath>
#include <iostream>

#include "movda/errors.hpp"
#include "movda/kernels.hpp"
#include "movda/replay.hpp"

namespace movda {

double accuracy(const std::vector<PredictionLogEntry>& log) {
  if (log.empty()) throw metric_error("accuracy undefined for an empty log");
  double credit = 0.0;
  for (const auto& e : log) {
    if (e.pre_rating_home == e.pre_rating_away) {
      credit += 0.5;  // rating tie: half credit
    } else {
      const int predicted = e.pre_rating_home > e.pre_rating_away ? 1 : 0;
      credit += predicted == e.actual_home_win ? 1.0 : 0.0;
    }
  }
  return 100.0 * credit / static_cast<double>(log.size());
}

double brier(const std::vector<PredictionLogEntry>& log) {
  if (log.empty()) throw metric_error("brier undefined for an empty log");
  std::vector<double> p(log.size()), o(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    p[i] = log[i].p_home_win;
    o[i] = static_cast<double>(log[i].actual_home_win);
  }
  return kernels::sum_sq_diff(p.data(), o.data(), p.size()) /
         static_cast<double>(p.size());
}

double margin_mae(const std::vector<PredictionLogEntry>& log,
                  const MovdaParams& p) {
  if (log.empty())
    throw metric_error("margin MAE undefined for an empty log");
  p.validate();
  const std::size_t n = log.size();
  std::vector<double> dr(n), ih(n), actual(n), predicted(n);
  for (std::size_t i = 0; i < n; ++i) {
    dr[i] = log[i].pre_rating_home - log[i].pre_rating_away;
    ih[i] = to_double(log[i].i_ha);
    actual[i] = log[i].actual_margin_home;
  }
  kernels::expected_mov_batch(dr.data(), ih.data(), predicted.data(), n, p);
  return kernels::sum_abs_diff(actual.data(), predicted.data(), n) /
         static_cast<double>(n);
}

double convergence_speed(
    const std::map<std::string, std::vector<double>>& history, double band,
    std::size_t stable_window) {
  if (!(band > 0.0)) throw std::invalid_argument("band must be > 0");
  if (stable_window < 1)
    throw std::invalid_argument("stable_window must be >= 1");
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& [team, series] : history) {
    if (series.size() < stable_window) {
      std::cerr << "convergence: excluding " << team << " ("
                << series.size() << " games < window " << stable_window
                << ")\n";
      continue;
    }
    double target = 0.0;
    for (std::size_t i = series.size() - stable_window; i < series.size();
         ++i)
      target += series[i];
    target /= static_cast<double>(stable_window);

    // first 1-based index from which the whole suffix stays in band;
    // series.size()+1 if even the last rating is outside
    std::size_t g = 1;
    for (std::size_t i = 0; i < series.size(); ++i)
      if (std::abs(series[i] - target) > band) g = i + 2;
    total += static_cast<double>(g);
    ++counted;
  }
  if (counted == 0)
    throw metric_error(
        "convergence undefined: no team has enough history");
  return total / static_cast<double>(counted);
}

}  // namespace movda
