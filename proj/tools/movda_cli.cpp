// Command-line front end: fit, tune, replay, evaluate, ablate, simulate,
// plot-data.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "movda/errors.hpp"
#include "movda/io.hpp"
#include "movda/kernels.hpp"
#include "movda/replay.hpp"
#include "movda/tuning.hpp"
#include "nlohmann/json.hpp"

namespace {

using nlohmann::json;
using namespace movda;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct DataOpts {
  std::string path;
  bool lenient = false;
  std::string split = "0.7,0.2,0.1";
};

void add_data_opts(CLI::App* cmd, DataOpts* opts, bool need_split = true) {
  cmd->add_option("--data", opts->path, "games CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--lenient-schema", opts->lenient,
                "accept non-integer scores (simulated leagues)");
  if (need_split)
    cmd->add_option("--split", opts->split,
                    "chronological train,tune,holdout fractions");
}

SplitSpec parse_split(const std::string& text) {
  SplitSpec spec;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &spec.train_frac,
                  &spec.tune_frac, &spec.holdout_frac) != 3)
    throw config_error("--split expects three comma-separated fractions");
  spec.validate();
  return spec;
}

std::vector<GameRecord> load(const DataOpts& opts) {
  LoadOptions lo;
  lo.integer_scores = !opts.lenient;
  return load_games(opts.path, lo);
}

std::string fmt6(double v) {
  if (!std::isfinite(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json config_json(const ModelConfig& cfg) {
  json j;
  switch (cfg.kind) {
    case ModelKind::elo:
      j = {{"k", cfg.elo.k}, {"c", cfg.elo.c}};
      break;
    case ModelKind::movda:
      j = {{"k", cfg.elo.k}, {"c", cfg.elo.c}, {"lambda", cfg.elo.lambda}};
      break;
    case ModelKind::linear_mov:
      j = {{"k", cfg.linear_mov.k},
           {"c", cfg.linear_mov.c},
           {"c_mov", cfg.linear_mov.c_mov},
           {"k_max", cfg.linear_mov.k_max}};
      break;
    case ModelKind::glicko2:
      j = {{"tau", cfg.glicko2.tau},
           {"initial_rd", cfg.glicko2.initial_rd},
           {"initial_volatility", cfg.glicko2.initial_volatility}};
      break;
    case ModelKind::trueskill:
      j = {{"mu0", cfg.trueskill.mu0},
           {"sigma0", cfg.trueskill.sigma0},
           {"beta", cfg.trueskill.beta},
           {"tau", cfg.trueskill.tau}};
      break;
  }
  return j;
}

// Model hyperparameter flags shared by replay/evaluate/ablate.
struct ModelOpts {
  double k = 20.0;
  double c = 400.0;
  double lambda = 0.0;
  double c_mov = 0.1;
  double k_max = 2.0;
  double glicko_tau = 0.5;
  double ts_beta = 2.0;
  double ts_tau = 0.2;

  ModelConfig build(ModelKind kind) const {
    ModelConfig cfg;
    cfg.kind = kind;
    cfg.elo.k = k;
    cfg.elo.c = c;
    cfg.elo.lambda = lambda;
    cfg.linear_mov.k = k;
    cfg.linear_mov.c = c;
    cfg.linear_mov.c_mov = c_mov;
    cfg.linear_mov.k_max = k_max;
    cfg.glicko2.tau = glicko_tau;
    cfg.trueskill.beta = ts_beta;
    cfg.trueskill.tau = ts_tau;
    return cfg;
  }
};

void add_model_opts(CLI::App* cmd, ModelOpts* opts) {
  cmd->add_option("--k", opts->k, "ELO-family K-factor");
  cmd->add_option("--c", opts->c, "logistic scale (default 400)");
  cmd->add_option("--lambda", opts->lambda, "margin-differential weight");
  cmd->add_option("--c-mov", opts->c_mov, "linear-mov multiplier slope");
  cmd->add_option("--k-max", opts->k_max, "linear-mov multiplier cap");
  cmd->add_option("--glicko-tau", opts->glicko_tau, "glicko2 tau");
  cmd->add_option("--ts-beta", opts->ts_beta, "trueskill beta");
  cmd->add_option("--ts-tau", opts->ts_tau, "trueskill dynamics tau");
}

struct EvalOpts {
  double band = 20.0;
  std::size_t window = 200;
  std::string eval_split = "holdout";
};

void add_eval_opts(CLI::App* cmd, EvalOpts* opts) {
  cmd->add_option("--band", opts->band, "convergence band, rating points");
  cmd->add_option("--stable-window", opts->window,
                  "games defining the stable rating target");
  cmd->add_option("--eval-split", opts->eval_split,
                  "split to report metrics on")
      ->check(CLI::IsMember({"tune", "holdout"}));
}

// Warm replay over everything before the evaluation span, metrics on the
// span, plus a reset-at-span-start replay for convergence.
EvalReport evaluate_model(const ModelConfig& cfg, const DatasetSplits& splits,
                          const std::optional<MovdaParams>& params,
                          const EvalOpts& eval,
                          std::vector<PredictionLogEntry>* log_out = nullptr,
                          std::map<std::string, std::vector<double>>*
                              history_out = nullptr) {
  const bool on_tune = eval.eval_split == "tune";
  std::vector<GameRecord> warm = splits.train;
  if (!on_tune) warm.insert(warm.end(), splits.tune.begin(), splits.tune.end());
  const std::vector<GameRecord>& span = on_tune ? splits.tune : splits.holdout;

  auto model = make_model(cfg, params);
  replay_model(warm, *model);
  const ReplayResult run = replay_model(span, *model, params);

  EvalReport report;
  report.accuracy_pct = accuracy(run.log);
  report.brier = brier(run.log);
  report.margin_mae = params ? margin_mae(run.log, *params) : kNaN;
  report.n_games = static_cast<long>(span.size());

  auto conv_model = make_model(cfg, params);
  replay_model(warm, *conv_model);
  conv_model->reset_to_default();  // every team starts the span as new
  const ReplayResult conv_run = replay_model(span, *conv_model);
  try {
    report.convergence_games =
        convergence_speed(conv_run.history, eval.band, eval.window);
  } catch (const metric_error& e) {
    std::cerr << "warning: " << e.what() << "\n";
    report.convergence_games = kNaN;
  }

  if (log_out) *log_out = run.log;
  if (history_out) *history_out = conv_run.history;
  return report;
}

MovdaParams load_or_fit_params(const std::string& params_path,
                               const DatasetSplits& splits,
                               const ModelOpts& model_opts,
                               bool fit_on_full) {
  if (!params_path.empty())
    return read_fit_report_json(params_path).params;
  EloConfig elo;
  elo.k = model_opts.k;
  elo.c = model_opts.c;
  std::vector<GameRecord> source = splits.train;
  if (fit_on_full) {
    source.insert(source.end(), splits.tune.begin(), splits.tune.end());
    source.insert(source.end(), splits.holdout.begin(),
                  splits.holdout.end());
  }
  const auto samples = collect_fit_samples(source, elo);
  const FitReport fit = fit_emov(samples);
  if (!fit.converged)
    std::cerr << "warning: margin fit did not report convergence\n";
  return fit.params;
}

std::string comparison_markdown(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::ostringstream out;
  out << "| Model | Acc (%) | Brier | Margin MAE | Conv (games) |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& [name, r] : rows) {
    out << "| " << name << " | " << fmt6(r.accuracy_pct) << " | "
        << fmt6(r.brier) << " | " << fmt6(r.margin_mae) << " | "
        << fmt6(r.convergence_games) << " |\n";
  }
  return out.str();
}

json report_json(const EvalReport& r) {
  return {{"accuracy_pct", r.accuracy_pct},
          {"brier", r.brier},
          {"margin_mae", r.margin_mae},
          {"convergence_games", r.convergence_games},
          {"n_games", r.n_games}};
}

int run_fit(const DataOpts& data, const ModelOpts& model,
            const std::string& samples_source, const std::string& out) {
  const auto games = load(data);
  const auto splits = split_dataset(games, parse_split(data.split));
  EloConfig elo;
  elo.k = model.k;
  elo.c = model.c;
  std::vector<GameRecord> source = splits.train;
  if (samples_source == "full") source = games;
  const auto samples = collect_fit_samples(source, elo);
  const FitReport report = fit_emov(samples);
  write_fit_report_json(out, report);
  std::cout << "fit " << report.n << " samples: alpha=" << report.params.alpha
            << " beta=" << report.params.beta
            << " gamma=" << report.params.gamma
            << " delta=" << report.params.delta
            << " sigma2=" << report.params.sigma2 << "\n"
            << "sse=" << report.sse << " iterations=" << report.iterations
            << " converged=" << (report.converged ? "yes" : "no") << "\n"
            << "wrote " << out << "\n";
  if (!report.converged) {
    std::cerr << "error: fit did not converge\n";
    return 1;
  }
  return 0;
}

int run_tune(const DataOpts& data, const ModelOpts& model_opts,
             const std::string& model_name, const std::string& params_path,
             int threads, const std::string& out,
             const std::string& table_csv) {
  const ModelKind kind = model_kind_from_string(model_name);
  const auto games = load(data);
  const auto splits = split_dataset(games, parse_split(data.split));
  std::optional<MovdaParams> params;
  if (kind == ModelKind::movda)
    params = load_or_fit_params(params_path, splits, model_opts, false);
  else if (!params_path.empty())
    params = read_fit_report_json(params_path).params;

  const ModelConfig base = model_opts.build(kind);
  const GridSpec grid = GridSpec::defaults_for(kind);
  const TuneResult result =
      grid_search(base, grid, splits.train, splits.tune, params, threads);

  json j;
  j["model"] = model_name;
  j["best_brier"] = result.best_brier;
  j["best_config"] = config_json(result.best_config);
  j["table"] = json::array();
  for (const auto& entry : result.table)
    j["table"].push_back(
        {{"values", entry.values}, {"brier", entry.brier}});
  atomic_write_text(out, j.dump(1) + "\n");

  if (!table_csv.empty()) {
    std::ostringstream csv;
    csv << "values,brier\n";
    for (const auto& entry : result.table) {
      for (std::size_t i = 0; i < entry.values.size(); ++i)
        csv << (i ? ";" : "") << entry.values[i];
      csv << ',' << entry.brier << '\n';
    }
    atomic_write_text(table_csv, csv.str());
  }
  std::cout << "tuned " << model_name << " over " << result.table.size()
            << " grid points: best brier " << result.best_brier << "\n"
            << "wrote " << out << "\n";
  return 0;
}

int run_replay(const DataOpts& data, const ModelOpts& model_opts,
               const EvalOpts& eval, const std::string& model_name,
               const std::string& params_path, const std::string& report_out,
               const std::string& log_out, const std::string& history_out) {
  const ModelKind kind = model_kind_from_string(model_name);
  const auto games = load(data);
  const auto splits = split_dataset(games, parse_split(data.split));

  std::optional<MovdaParams> params;
  if (!params_path.empty())
    params = read_fit_report_json(params_path).params;
  else if (kind == ModelKind::movda)
    params = load_or_fit_params("", splits, model_opts, false);

  const ModelConfig cfg = model_opts.build(kind);
  std::vector<PredictionLogEntry> log;
  std::map<std::string, std::vector<double>> history;
  const EvalReport report =
      evaluate_model(cfg, splits, params, eval, &log, &history);

  std::cout << model_name << " on " << eval.eval_split << ": acc "
            << fmt6(report.accuracy_pct) << "%, brier " << fmt6(report.brier)
            << ", margin mae " << fmt6(report.margin_mae) << ", convergence "
            << fmt6(report.convergence_games) << " games (" << report.n_games
            << " games)\n";
  if (!report_out.empty()) write_eval_report_json(report_out, report);
  if (!log_out.empty()) write_prediction_log_csv(log_out, log);
  if (!history_out.empty()) write_rating_history_csv(history_out, history);
  return 0;
}

int run_evaluate(const DataOpts& data, const ModelOpts& model_opts,
                 const EvalOpts& eval, const std::string& params_path,
                 bool no_tune, const std::string& fit_samples_source,
                 int threads, const std::string& out,
                 const std::string& markdown_out) {
  const auto games = load(data);
  const auto splits = split_dataset(games, parse_split(data.split));
  const MovdaParams params = load_or_fit_params(
      params_path, splits, model_opts, fit_samples_source == "full");

  const ModelKind kinds[] = {ModelKind::elo, ModelKind::linear_mov,
                             ModelKind::glicko2, ModelKind::trueskill,
                             ModelKind::movda};
  std::vector<std::pair<std::string, EvalReport>> rows;
  json models_json;
  for (const ModelKind kind : kinds) {
    ModelConfig cfg = model_opts.build(kind);
    if (!no_tune) {
      const GridSpec grid = GridSpec::defaults_for(kind);
      cfg = grid_search(cfg, grid, splits.train, splits.tune, params, threads)
                .best_config;
    }
    const EvalReport report = evaluate_model(cfg, splits, params, eval);
    rows.emplace_back(model_kind_name(kind), report);
    json entry = report_json(report);
    entry["config"] = config_json(cfg);
    models_json[model_kind_name(kind)] = entry;
  }

  const std::string table = comparison_markdown(rows);
  std::cout << table;
  if (!markdown_out.empty()) atomic_write_text(markdown_out, table);
  if (!out.empty()) {
    json j;
    j["eval_split"] = eval.eval_split;
    j["n_games"] = rows.front().second.n_games;
    j["tuned"] = !no_tune;
    j["params"] = {{"alpha", params.alpha},
                   {"beta", params.beta},
                   {"gamma", params.gamma},
                   {"delta", params.delta},
                   {"sigma2", params.sigma2}};
    j["models"] = models_json;
    atomic_write_text(out, j.dump(1) + "\n");
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_ablate(const DataOpts& data, const ModelOpts& model_opts,
               const EvalOpts& eval, const std::string& params_path,
               bool no_tune, int threads, const std::string& out) {
  const auto games = load(data);
  const auto splits = split_dataset(games, parse_split(data.split));
  const MovdaParams params =
      load_or_fit_params(params_path, splits, model_opts, false);

  ModelConfig full = model_opts.build(ModelKind::movda);
  if (!no_tune) {
    const GridSpec grid = GridSpec::defaults_for(ModelKind::movda);
    full = grid_search(full, grid, splits.train, splits.tune, params, threads)
               .best_config;
  }
  ModelConfig ablated = full;
  ablated.elo.lambda = 0.0;  // margin differential removed

  std::vector<std::pair<std::string, EvalReport>> rows;
  rows.emplace_back("movda (lambda=0)",
                    evaluate_model(ablated, splits, params, eval));
  rows.emplace_back("movda (full)",
                    evaluate_model(full, splits, params, eval));
  const std::string table = comparison_markdown(rows);
  std::cout << table;
  if (!out.empty()) {
    json j;
    j["eval_split"] = eval.eval_split;
    j["lambda"] = full.elo.lambda;
    j["no_differential"] = report_json(rows[0].second);
    j["full"] = report_json(rows[1].second);
    atomic_write_text(out, j.dump(1) + "\n");
  }
  return 0;
}

int run_simulate(int teams, long games, std::uint64_t seed, double alpha,
                 double beta, double gamma, double delta, double sigma,
                 double skill_spread, const std::string& skills_csv,
                 int step_team, long step_at, double step_delta,
                 const std::string& out, const std::string& truth_out) {
  LeagueSpec spec;
  spec.n_teams = teams;
  spec.n_games = games;
  spec.seed = seed;
  spec.params.alpha = alpha;
  spec.params.beta = beta;
  spec.params.gamma = gamma;
  spec.params.delta = delta;
  spec.params.sigma2 = sigma * sigma;

  if (!skills_csv.empty()) {
    std::stringstream ss(skills_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      spec.skills.push_back(std::stod(item));
  } else {
    for (int i = 0; i < teams; ++i) {
      const double frac =
          teams > 1 ? static_cast<double>(i) / (teams - 1) : 0.5;
      spec.skills.push_back(1500.0 - skill_spread + 2.0 * skill_spread * frac);
    }
  }
  if (step_team >= 0) {
    StepChange step;
    step.team_index = step_team;
    step.at_game = step_at < 0 ? games / 2 : step_at;
    step.skill_delta = step_delta;
    spec.step = step;
  }

  const auto league = simulate_league(spec);
  write_games_csv(out, league);
  std::cout << "simulated " << league.size() << " games for " << teams
            << " teams, wrote " << out << "\n";
  if (!truth_out.empty()) {
    json j;
    j["params"] = {{"alpha", alpha}, {"beta", beta},   {"gamma", gamma},
                   {"delta", delta}, {"sigma", sigma}, {"seed", seed}};
    j["skills"] = spec.skills;
    if (spec.step)
      j["step"] = {{"team_index", spec.step->team_index},
                   {"at_game", spec.step->at_game},
                   {"skill_delta", spec.step->skill_delta}};
    atomic_write_text(truth_out, j.dump(1) + "\n");
  }
  return 0;
}

int run_plot_data(const DataOpts& data, const ModelOpts& model_opts,
                  const std::string& params_path, double bin_width,
                  double margin_bin_width, const std::string& out_dir) {
  const auto games = load(data);
  const auto splits = split_dataset(games, parse_split(data.split));
  MovdaParams params;
  if (params_path.empty())
    throw config_error("plot-data requires --params (run fit first)");
  params = read_fit_report_json(params_path).params;

  EloConfig elo;
  elo.k = model_opts.k;
  elo.c = model_opts.c;
  const auto samples = collect_fit_samples(splits.train, elo);
  const FitPlotData fit_plot =
      export_fit_plot_data(samples, params, bin_width);
  write_fit_plot_json(out_dir + "/fit_plot.json", fit_plot);
  write_fit_plot_bins_csv(out_dir + "/fit_plot_bins.csv", fit_plot);

  for (const auto ctx : {MarginContext::home, MarginContext::away}) {
    const MarginHistogram hist =
        export_margin_histogram(games, ctx, margin_bin_width);
    const std::string stem = out_dir + "/margins_" + hist.context;
    write_margin_histogram_json(stem + ".json", hist);
    write_margin_histogram_csv(stem + ".csv", hist);
  }
  std::cout << "wrote plot data to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MOVDA margin-aware rating engine"};
  app.require_subcommand(1);

  std::function<int()> action;

  // fit
  {
    auto* cmd = app.add_subcommand(
        "fit", "fit expected-margin parameters on the train split");
    auto data = std::make_shared<DataOpts>();
    auto model = std::make_shared<ModelOpts>();
    auto source = std::make_shared<std::string>("train");
    auto out = std::make_shared<std::string>("params.json");
    add_data_opts(cmd, data.get());
    add_model_opts(cmd, model.get());
    cmd->add_option("--fit-samples", *source,
                    "ratings feeding the fit: train-split replay or the "
                    "whole dataset")
        ->check(CLI::IsMember({"train", "full"}));
    cmd->add_option("--out", *out, "parameters file to write");
    cmd->callback([=, &action] {
      action = [=] { return run_fit(*data, *model, *source, *out); };
    });
  }

  // tune
  {
    auto* cmd =
        app.add_subcommand("tune", "grid search on the tuning split");
    auto data = std::make_shared<DataOpts>();
    auto model = std::make_shared<ModelOpts>();
    auto name = std::make_shared<std::string>();
    auto params = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(1);
    auto out = std::make_shared<std::string>("tune.json");
    auto table_csv = std::make_shared<std::string>();
    add_data_opts(cmd, data.get());
    add_model_opts(cmd, model.get());
    cmd->add_option("--model", *name, "model to tune")
        ->required()
        ->check(CLI::IsMember(
            {"elo", "movda", "linear-mov", "glicko2", "trueskill"}));
    cmd->add_option("--params", *params, "fitted parameters file");
    cmd->add_option("--threads", *threads, "parallel grid evaluation");
    cmd->add_option("--out", *out, "tune result JSON");
    cmd->add_option("--table-csv", *table_csv, "full table CSV");
    cmd->callback([=, &action] {
      action = [=] {
        return run_tune(*data, *model, *name, *params, *threads, *out,
                        *table_csv);
      };
    });
  }

  // replay
  {
    auto* cmd = app.add_subcommand(
        "replay", "replay one model and report the four metrics");
    auto data = std::make_shared<DataOpts>();
    auto model = std::make_shared<ModelOpts>();
    auto eval = std::make_shared<EvalOpts>();
    auto name = std::make_shared<std::string>();
    auto params = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    auto log = std::make_shared<std::string>();
    auto history = std::make_shared<std::string>();
    add_data_opts(cmd, data.get());
    add_model_opts(cmd, model.get());
    add_eval_opts(cmd, eval.get());
    cmd->add_option("--model", *name, "model to replay")
        ->required()
        ->check(CLI::IsMember(
            {"elo", "movda", "linear-mov", "glicko2", "trueskill"}));
    cmd->add_option("--params", *params, "fitted parameters file");
    cmd->add_option("--report", *report, "metric report JSON");
    cmd->add_option("--log", *log, "prediction log CSV");
    cmd->add_option("--history", *history, "rating history CSV");
    cmd->callback([=, &action] {
      action = [=] {
        return run_replay(*data, *model, *eval, *name, *params, *report,
                          *log, *history);
      };
    });
  }

  // evaluate
  {
    auto* cmd = app.add_subcommand(
        "evaluate", "compare all five models on one dataset");
    auto data = std::make_shared<DataOpts>();
    auto model = std::make_shared<ModelOpts>();
    auto eval = std::make_shared<EvalOpts>();
    auto params = std::make_shared<std::string>();
    auto no_tune = std::make_shared<bool>(false);
    auto source = std::make_shared<std::string>("train");
    auto threads = std::make_shared<int>(1);
    auto out = std::make_shared<std::string>("evaluation.json");
    auto markdown = std::make_shared<std::string>();
    add_data_opts(cmd, data.get());
    add_model_opts(cmd, model.get());
    add_eval_opts(cmd, eval.get());
    cmd->add_option("--params", *params, "fitted parameters file");
    cmd->add_flag("--no-tune", *no_tune, "skip hyperparameter tuning");
    cmd->add_option("--fit-samples", *source, "see fit --fit-samples")
        ->check(CLI::IsMember({"train", "full"}));
    cmd->add_option("--threads", *threads, "parallel grid evaluation");
    cmd->add_option("--out", *out, "comparison JSON");
    cmd->add_option("--markdown", *markdown, "comparison markdown table");
    cmd->callback([=, &action] {
      action = [=] {
        return run_evaluate(*data, *model, *eval, *params, *no_tune, *source,
                            *threads, *out, *markdown);
      };
    });
  }

  // ablate
  {
    auto* cmd = app.add_subcommand(
        "ablate", "movda with and without the margin differential");
    auto data = std::make_shared<DataOpts>();
    auto model = std::make_shared<ModelOpts>();
    auto eval = std::make_shared<EvalOpts>();
    auto params = std::make_shared<std::string>();
    auto no_tune = std::make_shared<bool>(false);
    auto threads = std::make_shared<int>(1);
    auto out = std::make_shared<std::string>("ablation.json");
    add_data_opts(cmd, data.get());
    add_model_opts(cmd, model.get());
    add_eval_opts(cmd, eval.get());
    cmd->add_option("--params", *params, "fitted parameters file");
    cmd->add_flag("--no-tune", *no_tune, "skip lambda tuning");
    cmd->add_option("--threads", *threads, "parallel grid evaluation");
    cmd->add_option("--out", *out, "ablation JSON");
    cmd->callback([=, &action] {
      action = [=] {
        return run_ablate(*data, *model, *eval, *params, *no_tune, *threads,
                          *out);
      };
    });
  }

  // simulate
  {
    auto* cmd =
        app.add_subcommand("simulate", "generate a synthetic league CSV");
    auto teams = std::make_shared<int>(8);
    auto games = std::make_shared<long>(2000);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto alpha = std::make_shared<double>(12.0);
    auto beta = std::make_shared<double>(0.004);
    auto gamma = std::make_shared<double>(0.0);
    auto delta = std::make_shared<double>(3.0);
    auto sigma = std::make_shared<double>(11.0);
    auto spread = std::make_shared<double>(200.0);
    auto skills = std::make_shared<std::string>();
    auto step_team = std::make_shared<int>(-1);
    auto step_at = std::make_shared<long>(-1);
    auto step_delta = std::make_shared<double>(150.0);
    auto out = std::make_shared<std::string>("league.csv");
    auto truth = std::make_shared<std::string>();
    cmd->add_option("--teams", *teams, "number of teams");
    cmd->add_option("--games", *games, "number of games");
    cmd->add_option("--seed", *seed, "RNG seed");
    cmd->add_option("--alpha", *alpha, "margin model alpha");
    cmd->add_option("--beta", *beta, "margin model beta");
    cmd->add_option("--gamma", *gamma, "margin model gamma");
    cmd->add_option("--delta", *delta, "home advantage, points");
    cmd->add_option("--sigma", *sigma, "margin noise std deviation");
    cmd->add_option("--skill-spread", *spread,
                    "skills spaced evenly across 1500 +/- spread");
    cmd->add_option("--skills", *skills, "explicit skills, comma separated");
    cmd->add_option("--step-team", *step_team,
                    "team index receiving a skill step change");
    cmd->add_option("--step-at", *step_at,
                    "league game index of the step (default mid-span)");
    cmd->add_option("--step-delta", *step_delta, "skill step, points");
    cmd->add_option("--out", *out, "games CSV to write");
    cmd->add_option("--truth-out", *truth, "ground-truth JSON to write");
    cmd->callback([=, &action] {
      action = [=] {
        return run_simulate(*teams, *games, *seed, *alpha, *beta, *gamma,
                            *delta, *sigma, *spread, *skills, *step_team,
                            *step_at, *step_delta, *out, *truth);
      };
    });
  }

  // plot-data
  {
    auto* cmd = app.add_subcommand(
        "plot-data", "export fitted-curve and margin-histogram data");
    auto data = std::make_shared<DataOpts>();
    auto model = std::make_shared<ModelOpts>();
    auto params = std::make_shared<std::string>();
    auto bin_width = std::make_shared<double>(25.0);
    auto margin_bin = std::make_shared<double>(2.0);
    auto out_dir = std::make_shared<std::string>(".");
    add_data_opts(cmd, data.get());
    add_model_opts(cmd, model.get());
    cmd->add_option("--params", *params, "fitted parameters file")
        ->required();
    cmd->add_option("--bin-width", *bin_width,
                    "rating-difference bin width for the fit plot");
    cmd->add_option("--margin-bin-width", *margin_bin,
                    "margin histogram bin width");
    cmd->add_option("--out-dir", *out_dir, "output directory");
    cmd->callback([=, &action] {
      action = [=] {
        return run_plot_data(*data, *model, *params, *bin_width, *margin_bin,
                             *out_dir);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
