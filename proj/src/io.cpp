#include "movda/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "movda/errors.hpp"
#include "nlohmann/json.hpp"

namespace movda {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& field, double* out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, *out);
  return res.ec == std::errc() && res.ptr == last;
}

bool is_integral(double v) {
  return std::floor(v) == v && std::abs(v) < 1e15;
}

bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  const int y = std::stoi(s.substr(0, 4));
  const int m = std::stoi(s.substr(5, 2));
  const int d = std::stoi(s.substr(8, 2));
  if (m < 1 || m > 12 || d < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int dim = days[m - 1];
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && leap) dim = 29;
  return d <= dim;
}

// Minimal CSV field splitter; double quotes wrap fields containing commas.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

[[noreturn]] void row_error(std::size_t line_no, const std::string& column,
                            const std::string& message) {
  throw data_error("row " + std::to_string(line_no) +
                   (column.empty() ? "" : ", column " + column) + ": " +
                   message);
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

std::vector<GameRecord> load_games(const std::string& path,
                                   const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open games file: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw data_error("games file is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv_line(line);
  const auto column = [&](const std::string& name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_id = column("game_id");
  const int c_date = column("date");
  const int c_season = column("season");
  const int c_home = column("home_team");
  const int c_away = column("away_team");
  const int c_hs = column("home_score");
  const int c_as = column("away_score");
  const int c_neutral = column("neutral_site");
  for (const auto& [idx, name] :
       std::initializer_list<std::pair<int, const char*>>{
           {c_id, "game_id"},
           {c_date, "date"},
           {c_season, "season"},
           {c_home, "home_team"},
           {c_away, "away_team"},
           {c_hs, "home_score"},
           {c_as, "away_score"}}) {
    if (idx < 0)
      throw data_error("missing required column: " + std::string(name));
  }

  std::vector<GameRecord> games;
  std::set<std::string> seen_ids;
  std::size_t line_no = 1;
  int file_order = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      row_error(line_no, "",
                "expected " + std::to_string(header.size()) + " fields, got " +
                    std::to_string(fields.size()));

    GameRecord g;
    g.game_id = fields[c_id];
    if (g.game_id.empty()) row_error(line_no, "game_id", "empty id");
    if (!seen_ids.insert(g.game_id).second)
      row_error(line_no, "game_id", "duplicate game id " + g.game_id);
    g.date = fields[c_date];
    if (!valid_iso_date(g.date))
      row_error(line_no, "date", "not a valid yyyy-mm-dd date: " + g.date);
    g.season = fields[c_season];
    g.home_team = fields[c_home];
    g.away_team = fields[c_away];
    if (g.home_team.empty() || g.away_team.empty())
      row_error(line_no, "home_team/away_team", "empty team id");
    if (g.home_team == g.away_team)
      row_error(line_no, "away_team", "home and away team are identical");

    const auto parse_score = [&](int col, const char* name) {
      double v;
      if (!parse_double(fields[col], &v) || !std::isfinite(v))
        row_error(line_no, name, "not a number: " + fields[col]);
      if (v < 0.0) row_error(line_no, name, "negative score");
      if (opts.integer_scores && !is_integral(v))
        row_error(line_no, name, "score must be an integer: " + fields[col]);
      return v;
    };
    g.home_score = parse_score(c_hs, "home_score");
    g.away_score = parse_score(c_as, "away_score");
    if (g.home_score == g.away_score)
      row_error(line_no, "home_score",
                "tied score (" + fields[c_hs] + ") is not permitted");

    if (c_neutral >= 0 && !fields[c_neutral].empty()) {
      if (fields[c_neutral] == "1")
        g.neutral_site = true;
      else if (fields[c_neutral] == "0")
        g.neutral_site = false;
      else
        row_error(line_no, "neutral_site",
                  "expected 0 or 1, got " + fields[c_neutral]);
    }
    g.file_order = file_order++;
    games.push_back(std::move(g));
  }

  const bool sorted =
      std::is_sorted(games.begin(), games.end(),
                     [](const GameRecord& a, const GameRecord& b) {
                       return a.date < b.date;
                     });
  if (!sorted) {
    std::cerr << "load_games: input not in date order, sorting " << path
              << "\n";
    std::stable_sort(games.begin(), games.end(),
                     [](const GameRecord& a, const GameRecord& b) {
                       return a.date < b.date;
                     });
  }
  return games;
}

void write_games_csv(const std::string& path,
                     const std::vector<GameRecord>& games) {
  std::ostringstream out;
  out << "game_id,date,season,home_team,away_team,home_score,away_score,"
         "neutral_site\n";
  for (const auto& g : games) {
    out << csv_escape(g.game_id) << ',' << g.date << ','
        << csv_escape(g.season) << ',' << csv_escape(g.home_team) << ','
        << csv_escape(g.away_team) << ',' << fmt_double(g.home_score) << ','
        << fmt_double(g.away_score) << ',' << (g.neutral_site ? 1 : 0)
        << '\n';
  }
  atomic_write_text(path, out.str());
}

void write_fit_report_json(const std::string& path, const FitReport& report) {
  json j;
  j["alpha"] = report.params.alpha;
  j["beta"] = report.params.beta;
  j["gamma"] = report.params.gamma;
  j["delta"] = report.params.delta;
  j["sigma2"] = report.params.sigma2;
  j["sse"] = report.sse;
  j["n"] = report.n;
  j["converged"] = report.converged;
  atomic_write_text(path, j.dump(1) + "\n");
}

FitReport read_fit_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open parameters file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("invalid parameters file " + path + ": " + e.what());
  }
  FitReport report;
  try {
    report.params.alpha = j.at("alpha").get<double>();
    report.params.beta = j.at("beta").get<double>();
    report.params.gamma = j.at("gamma").get<double>();
    report.params.delta = j.at("delta").get<double>();
    report.params.sigma2 = j.at("sigma2").get<double>();
    report.sse = j.at("sse").get<double>();
    report.n = j.at("n").get<std::size_t>();
    report.converged = j.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw config_error("invalid parameters file " + path + ": " + e.what());
  }
  try {
    report.params.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error("parameters file " + path +
                       " violates invariants: " + e.what());
  }
  return report;
}

void write_prediction_log_csv(const std::string& path,
                              const std::vector<PredictionLogEntry>& log) {
  std::ostringstream out;
  out << "game_id,p_home_win,predicted_margin_home,actual_home_win,"
         "actual_margin_home,pre_rating_home,pre_rating_away,home_indicator"
         "\n";
  for (const auto& e : log) {
    out << csv_escape(e.game_id) << ',' << fmt_double(e.p_home_win) << ',';
    if (std::isfinite(e.predicted_margin_home))
      out << fmt_double(e.predicted_margin_home);
    out << ',' << e.actual_home_win << ','
        << fmt_double(e.actual_margin_home) << ','
        << fmt_double(e.pre_rating_home) << ','
        << fmt_double(e.pre_rating_away) << ','
        << static_cast<int>(e.i_ha) << '\n';
  }
  atomic_write_text(path, out.str());
}

void write_rating_history_csv(
    const std::string& path,
    const std::map<std::string, std::vector<double>>& history) {
  std::ostringstream out;
  out << "team,game_number,rating\n";
  for (const auto& [team, series] : history) {
    for (std::size_t i = 0; i < series.size(); ++i)
      out << csv_escape(team) << ',' << i + 1 << ',' << fmt_double(series[i])
          << '\n';
  }
  atomic_write_text(path, out.str());
}

std::string eval_report_json(const EvalReport& report) {
  json j;
  j["accuracy_pct"] = report.accuracy_pct;
  j["brier"] = report.brier;
  j["margin_mae"] = report.margin_mae;
  j["convergence_games"] = report.convergence_games;
  j["n_games"] = report.n_games;
  return j.dump(1) + "\n";
}

void write_eval_report_json(const std::string& path,
                            const EvalReport& report) {
  atomic_write_text(path, eval_report_json(report));
}

FitPlotData export_fit_plot_data(const std::vector<FitSample>& samples,
                                 const MovdaParams& p, double bin_width) {
  if (samples.empty())
    throw insufficient_data_error("no samples to bin for the fit plot");
  if (!(bin_width > 0.0))
    throw std::invalid_argument("bin_width must be > 0");
  p.validate();

  FitPlotData out;
  out.bin_width = bin_width;
  out.n_samples = samples.size();

  for (const home_indicator ctx : {home_indicator::home,
                                   home_indicator::away}) {
    FitPlotSeries& series =
        ctx == home_indicator::home ? out.home : out.away;
    std::vector<double> dr, tm;
    for (const auto& s : samples) {
      if (s.i_ha != ctx) continue;
      dr.push_back(s.delta_r);
      tm.push_back(s.t_mov);
    }
    if (dr.empty()) continue;

    const auto [mn_it, mx_it] = std::minmax_element(dr.begin(), dr.end());
    const double start = std::floor(*mn_it / bin_width) * bin_width;
    const std::size_t n_bins =
        static_cast<std::size_t>((*mx_it - start) / bin_width) + 1;
    std::vector<long> count(n_bins, 0);
    std::vector<double> sum(n_bins, 0.0), sumsq(n_bins, 0.0);
    for (std::size_t i = 0; i < dr.size(); ++i) {
      std::size_t idx =
          static_cast<std::size_t>((dr[i] - start) / bin_width);
      if (idx >= n_bins) idx = n_bins - 1;
      ++count[idx];
      sum[idx] += tm[i];
      sumsq[idx] += tm[i] * tm[i];
    }
    series.bins.reserve(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
      FitPlotBin bin;
      bin.center = start + (static_cast<double>(b) + 0.5) * bin_width;
      bin.count = count[b];
      if (count[b] > 0) bin.mean = sum[b] / static_cast<double>(count[b]);
      if (count[b] > 1) {
        const double ss =
            sumsq[b] - sum[b] * sum[b] / static_cast<double>(count[b]);
        bin.stddev =
            std::sqrt(std::max(0.0, ss / static_cast<double>(count[b] - 1)));
      }
      bin.low_n = count[b] < 5;
      series.bins.push_back(bin);
    }

    const double step = bin_width / 5.0;
    const double c_start = std::floor(*mn_it / step) * step;
    for (double x = c_start; x <= *mx_it + step / 2.0; x += step)
      series.curve.emplace_back(x, expected_mov(x, ctx, p));
  }
  return out;
}

MarginHistogram export_margin_histogram(const std::vector<GameRecord>& games,
                                        MarginContext ctx, double bin_width) {
  if (games.empty())
    throw insufficient_data_error("no games for the margin histogram");
  if (!(bin_width > 0.0))
    throw std::invalid_argument("bin_width must be > 0");

  MarginHistogram hist;
  hist.context = ctx == MarginContext::home ? "home" : "away";
  hist.bin_width = bin_width;
  hist.n = games.size();

  std::vector<double> margins;
  margins.reserve(games.size());
  for (const auto& g : games)
    margins.push_back(ctx == MarginContext::home ? g.margin_home()
                                                 : -g.margin_home());

  double mean = 0.0;
  for (double m : margins) mean += m;
  mean /= static_cast<double>(margins.size());
  double ss = 0.0;
  for (double m : margins) ss += (m - mean) * (m - mean);
  const double sd = margins.size() > 1
                        ? std::sqrt(ss / static_cast<double>(margins.size() - 1))
                        : 0.0;
  hist.mean = mean;
  hist.stddev = sd;

  const auto [mn_it, mx_it] =
      std::minmax_element(margins.begin(), margins.end());
  hist.lo = std::floor(*mn_it / bin_width) * bin_width;
  const std::size_t n_bins =
      static_cast<std::size_t>((*mx_it - hist.lo) / bin_width) + 1;
  hist.counts.assign(n_bins, 0);
  for (double m : margins) {
    std::size_t idx = static_cast<std::size_t>((m - hist.lo) / bin_width);
    if (idx >= n_bins) idx = n_bins - 1;
    ++hist.counts[idx];
  }

  std::vector<double> sorted = margins;
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      percentile_sorted(sorted, 0.75) - percentile_sorted(sorted, 0.25);
  double h = 0.9 * std::min(sd, iqr / 1.34) *
             std::pow(static_cast<double>(margins.size()), -0.2);
  if (!(h > 0.0)) h = std::max(bin_width / 2.0, 1e-6);
  hist.bandwidth = h;

  const double x_lo = *mn_it - 3.0 * h;
  const double x_hi = *mx_it + 3.0 * h;
  constexpr int kKdePoints = 201;
  const double step = (x_hi - x_lo) / (kKdePoints - 1);
  const double norm =
      1.0 / (static_cast<double>(margins.size()) * h *
             std::sqrt(2.0 * M_PI));
  hist.kde.reserve(kKdePoints);
  for (int i = 0; i < kKdePoints; ++i) {
    const double x = x_lo + step * i;
    double density = 0.0;
    for (double m : margins) {
      const double z = (x - m) / h;
      density += std::exp(-0.5 * z * z);
    }
    hist.kde.emplace_back(x, density * norm);
  }
  return hist;
}

void write_fit_plot_json(const std::string& path, const FitPlotData& data) {
  const auto series_json = [](const FitPlotSeries& s) {
    json out;
    out["bins"] = json::array();
    for (const auto& b : s.bins) {
      out["bins"].push_back({{"center", b.center},
                             {"count", b.count},
                             {"mean", b.mean},
                             {"stddev", b.stddev},
                             {"low_n", b.low_n}});
    }
    out["curve"] = json::array();
    for (const auto& [x, y] : s.curve) out["curve"].push_back({x, y});
    return out;
  };
  json j;
  j["bin_width"] = data.bin_width;
  j["n_samples"] = data.n_samples;
  j["home"] = series_json(data.home);
  j["away"] = series_json(data.away);
  atomic_write_text(path, j.dump(1) + "\n");
}

void write_fit_plot_bins_csv(const std::string& path,
                             const FitPlotData& data) {
  std::ostringstream out;
  out << "context,center,count,mean,stddev,low_n\n";
  const auto emit = [&](const char* name, const FitPlotSeries& s) {
    for (const auto& b : s.bins)
      out << name << ',' << fmt_double(b.center) << ',' << b.count << ','
          << fmt_double(b.mean) << ',' << fmt_double(b.stddev) << ','
          << (b.low_n ? 1 : 0) << '\n';
  };
  emit("home", data.home);
  emit("away", data.away);
  atomic_write_text(path, out.str());
}

void write_margin_histogram_json(const std::string& path,
                                 const MarginHistogram& hist) {
  json j;
  j["context"] = hist.context;
  j["bin_width"] = hist.bin_width;
  j["lo"] = hist.lo;
  j["counts"] = hist.counts;
  j["mean"] = hist.mean;
  j["stddev"] = hist.stddev;
  j["bandwidth"] = hist.bandwidth;
  j["n"] = hist.n;
  j["kde"] = json::array();
  for (const auto& [x, d] : hist.kde) j["kde"].push_back({x, d});
  atomic_write_text(path, j.dump(1) + "\n");
}

void write_margin_histogram_csv(const std::string& path,
                                const MarginHistogram& hist) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double lo = hist.lo + hist.bin_width * static_cast<double>(i);
    out << fmt_double(lo) << ',' << fmt_double(lo + hist.bin_width) << ','
        << hist.counts[i] << '\n';
  }
  atomic_write_text(path, out.str());
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write file: " + tmp);
    out << content;
    if (!out.good()) throw config_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw config_error("cannot move " + tmp + " into place");
  }
}

}  // namespace movda
