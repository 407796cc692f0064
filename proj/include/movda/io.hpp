#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "movda/fitting.hpp"
#include "movda/replay.hpp"

namespace movda {

struct LoadOptions {
  // Enforce integral scores (the NBA schema). Disable to consume simulated
  // leagues, whose margins are real-valued.
  bool integer_scores = true;
};

// Parse and validate a games CSV. Required columns: game_id, date, season,
// home_team, away_team, home_score, away_score; optional: neutral_site.
// Rows are returned sorted by (date, file order); unsorted input is sorted
// with a notice. Tied scores, duplicate ids and schema violations throw
// data_error naming the row.
std::vector<GameRecord> load_games(const std::string& path,
                                   const LoadOptions& opts = {});

void write_games_csv(const std::string& path,
                     const std::vector<GameRecord>& games);

// Fitted parameters file: JSON object with keys alpha, beta, gamma, delta,
// sigma2, sse, n, converged. Doubles round-trip exactly.
void write_fit_report_json(const std::string& path, const FitReport& report);
FitReport read_fit_report_json(const std::string& path);

void write_prediction_log_csv(const std::string& path,
                              const std::vector<PredictionLogEntry>& log);
void write_rating_history_csv(
    const std::string& path,
    const std::map<std::string, std::vector<double>>& history);

// Metric report with keys accuracy_pct, brier, margin_mae,
// convergence_games, n_games.
void write_eval_report_json(const std::string& path, const EvalReport& report);
std::string eval_report_json(const EvalReport& report);

// --- figure data exports ---

struct FitPlotBin {
  double center = 0.0;
  long count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // n-1 divisor; 0 when count < 2
  bool low_n = false;   // fewer than 5 samples
};

struct FitPlotSeries {
  std::vector<FitPlotBin> bins;
  std::vector<std::pair<double, double>> curve;  // (delta_r, fitted E_MOV)
};

struct FitPlotData {
  FitPlotSeries home;  // venue indicator +1
  FitPlotSeries away;  // venue indicator -1
  double bin_width = 25.0;
  std::size_t n_samples = 0;
};

// Binned observed margins against the fitted curve, split by venue
// context. Neutral-site samples belong to neither panel.
FitPlotData export_fit_plot_data(const std::vector<FitSample>& samples,
                                 const MovdaParams& p,
                                 double bin_width = 25.0);

enum class MarginContext { home, away };

struct MarginHistogram {
  std::string context;
  double bin_width = 2.0;
  double lo = 0.0;  // left edge of counts[0]
  std::vector<long> counts;
  std::vector<std::pair<double, double>> kde;  // (margin, density)
  double mean = 0.0;
  double stddev = 0.0;
  double bandwidth = 0.0;  // Silverman's rule
  std::size_t n = 0;
};

MarginHistogram export_margin_histogram(const std::vector<GameRecord>& games,
                                        MarginContext ctx,
                                        double bin_width = 2.0);

void write_fit_plot_json(const std::string& path, const FitPlotData& data);
void write_fit_plot_bins_csv(const std::string& path, const FitPlotData& data);
void write_margin_histogram_json(const std::string& path,
                                 const MarginHistogram& hist);
void write_margin_histogram_csv(const std::string& path,
                                const MarginHistogram& hist);

// write-temp-then-rename
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace movda
