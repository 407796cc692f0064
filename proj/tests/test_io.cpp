#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "movda/errors.hpp"
#include "movda/io.hpp"

using namespace movda;

namespace {

std::string temp_dir() {
  char pattern[] = "/tmp/movda_io_XXXXXX";
  const char* dir = mkdtemp(pattern);
  REQUIRE(dir != nullptr);
  return dir;
}

std::string write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  return path;
}

const char* kHeader =
    "game_id,date,season,home_team,away_team,home_score,away_score\n";

}  // namespace

TEST_CASE("load_games parses and sorts a well-formed file") {
  const std::string dir = temp_dir();
  const std::string path = write_file(
      dir + "/games.csv",
      std::string(kHeader) + "g3,2020-01-03,2020,BOS,NYK,101,99\n"
                             "g1,2020-01-01,2020,LAL,GSW,110,108\n"
                             "g2,2020-01-01,2020,MIA,CHI,95,90\n");
  const auto games = load_games(path);
  REQUIRE_EQ(games.size(), 3);
  CHECK_EQ(games[0].game_id, "g1");  // same-date order follows the file
  CHECK_EQ(games[1].game_id, "g2");
  CHECK_EQ(games[2].game_id, "g3");
  CHECK_EQ(games[0].margin_home(), 2.0);
  CHECK_FALSE(games[0].neutral_site);
}

TEST_CASE("load_games rejects schema violations with row numbers") {
  const std::string dir = temp_dir();
  const auto expect_error = [&](const std::string& rows,
                                const std::string& needle) {
    const std::string path =
        write_file(dir + "/bad.csv", std::string(kHeader) + rows);
    try {
      load_games(path);
      FAIL("expected data_error for: " << rows);
    } catch (const data_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("g1,2020-01-01,2020,LAL,GSW,100,100\n", "tied score");
  expect_error("g1,2020-01-01,2020,LAL,GSW,100.5,99\n", "integer");
  expect_error("g1,2020-01-01,2020,LAL,LAL,100,99\n", "identical");
  expect_error("g1,2020-13-01,2020,LAL,GSW,100,99\n", "date");
  expect_error("g1,2020-01-01,2020,LAL,GSW,-3,99\n", "negative");
  expect_error(
      "g1,2020-01-01,2020,LAL,GSW,100,99\ng1,2020-01-02,2020,MIA,CHI,90,80\n",
      "duplicate");
  expect_error("g1,2020-01-01,2020,LAL,GSW,abc,99\n", "not a number");

  const std::string missing =
      write_file(dir + "/missing.csv",
                 "game_id,date,home_team,away_team,home_score,away_score\n");
  CHECK_THROWS_AS(load_games(missing), data_error);
}

TEST_CASE("lenient schema admits real-valued scores, still rejects ties") {
  const std::string dir = temp_dir();
  const std::string path = write_file(
      dir + "/sim.csv", std::string(kHeader) +
                            "g1,2020-01-01,2020,T1,T2,12.25,0\n"
                            "g2,2020-01-02,2020,T2,T1,0,3.5\n");
  CHECK_THROWS_AS(load_games(path), data_error);
  LoadOptions lenient;
  lenient.integer_scores = false;
  const auto games = load_games(path, lenient);
  CHECK_EQ(games[0].home_score, 12.25);

  const std::string tied = write_file(
      dir + "/tied.csv",
      std::string(kHeader) + "g1,2020-01-01,2020,T1,T2,10.5,10.5\n");
  CHECK_THROWS_AS(load_games(tied, lenient), data_error);
}

TEST_CASE("neutral_site column") {
  const std::string dir = temp_dir();
  const std::string path = write_file(
      dir + "/neutral.csv",
      "game_id,date,season,home_team,away_team,home_score,away_score,"
      "neutral_site\n"
      "g1,2020-01-01,2020,LAL,GSW,100,99,1\n"
      "g2,2020-01-02,2020,MIA,CHI,90,80,0\n");
  const auto games = load_games(path);
  CHECK(games[0].neutral_site);
  CHECK_EQ(games[0].indicator(), home_indicator::neutral);
  CHECK_FALSE(games[1].neutral_site);
}

TEST_CASE("games CSV round-trips a simulated league losslessly") {
  LeagueSpec spec;
  spec.n_teams = 5;
  spec.n_games = 120;
  spec.seed = 8;
  spec.params.alpha = 12;
  spec.params.beta = 0.004;
  spec.params.delta = 3;
  spec.params.sigma2 = 121;
  spec.skills = {1400, 1450, 1500, 1550, 1600};
  const auto games = simulate_league(spec);

  const std::string dir = temp_dir();
  const std::string path = dir + "/league.csv";
  write_games_csv(path, games);
  LoadOptions lenient;
  lenient.integer_scores = false;
  const auto reread = load_games(path, lenient);
  REQUIRE_EQ(reread.size(), games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    CHECK_EQ(reread[i].game_id, games[i].game_id);
    CHECK_EQ(reread[i].date, games[i].date);
    CHECK_EQ(reread[i].home_score, games[i].home_score);
    CHECK_EQ(reread[i].away_score, games[i].away_score);
  }
}

TEST_CASE("parameters file round-trips exactly") {
  FitReport report;
  report.params.alpha = 11.73230127495823;
  report.params.beta = 0.00412345678901234;
  report.params.gamma = -0.3333333333333333;
  report.params.delta = 2.718281828459045;
  report.params.sigma2 = 121.00000000000301;
  report.sse = 1.2345678901234567e6;
  report.n = 9533;
  report.converged = true;

  const std::string path = temp_dir() + "/params.json";
  write_fit_report_json(path, report);
  const FitReport reread = read_fit_report_json(path);
  CHECK_EQ(reread.params.alpha, report.params.alpha);
  CHECK_EQ(reread.params.beta, report.params.beta);
  CHECK_EQ(reread.params.gamma, report.params.gamma);
  CHECK_EQ(reread.params.delta, report.params.delta);
  CHECK_EQ(reread.params.sigma2, report.params.sigma2);
  CHECK_EQ(reread.sse, report.sse);
  CHECK_EQ(reread.n, report.n);
  CHECK_EQ(reread.converged, report.converged);

  CHECK_THROWS_AS(read_fit_report_json("/nonexistent/params.json"),
                  config_error);
  const std::string broken = temp_dir() + "/broken.json";
  write_file(broken, "{\"alpha\": 1.0}");
  CHECK_THROWS_AS(read_fit_report_json(broken), config_error);
}

TEST_CASE("eval report JSON uses the contract keys") {
  EvalReport r;
  r.accuracy_pct = 62.77;
  r.brier = 0.2274;
  r.margin_mae = 9.1;
  r.convergence_games = 193.0;
  r.n_games = 1363;
  const std::string text = eval_report_json(r);
  for (const char* key : {"accuracy_pct", "brier", "margin_mae",
                          "convergence_games", "n_games"})
    CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("fit plot export bins and curve") {
  MovdaParams p;
  p.alpha = 10;
  p.beta = 0.005;
  p.gamma = 1.0;
  p.delta = 3.0;

  std::vector<FitSample> samples;
  FitSample a;
  a.delta_r = 5.0;
  a.i_ha = home_indicator::home;
  a.t_mov = 5.0;
  FitSample b = a;
  b.t_mov = 7.0;
  samples.push_back(a);
  samples.push_back(b);
  FitSample c;
  c.delta_r = -10.0;
  c.i_ha = home_indicator::away;
  c.t_mov = -4.0;
  samples.push_back(c);

  const FitPlotData data = export_fit_plot_data(samples, p, 25.0);
  REQUIRE_EQ(data.home.bins.size(), 1);
  CHECK_EQ(data.home.bins[0].count, 2);
  CHECK_EQ(data.home.bins[0].mean, 6.0);
  CHECK(data.home.bins[0].stddev ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(data.home.bins[0].low_n);

  // the dense curve hits delta_r = 0, where the home value is gamma + delta
  bool found_zero = false;
  for (const auto& [x, y] : data.home.curve) {
    if (x == 0.0) {
      found_zero = true;
      CHECK_EQ(y, p.gamma + p.delta);
    }
  }
  CHECK(found_zero);
  CHECK_THROWS_AS(export_fit_plot_data({}, p, 25.0),
                  insufficient_data_error);
}

TEST_CASE("fit plot bin means track the curve on synthetic data") {
  MovdaParams truth;
  truth.alpha = 12;
  truth.beta = 0.004;
  truth.gamma = 0.3;
  truth.delta = 2.5;
  truth.sigma2 = 121.0;

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dr(-500.0, 500.0);
  std::normal_distribution<double> noise(0.0, 11.0);
  std::vector<FitSample> samples;
  for (int i = 0; i < 40000; ++i) {
    FitSample s;
    s.delta_r = dr(rng);
    s.i_ha = i % 2 ? home_indicator::home : home_indicator::away;
    s.t_mov = expected_mov(s.delta_r, s.i_ha, truth) + noise(rng);
    samples.push_back(s);
  }
  const FitPlotData data = export_fit_plot_data(samples, truth, 25.0);
  std::vector<double> zscores;
  long covered = 0;
  for (const auto* series : {&data.home, &data.away}) {
    for (const auto& bin : series->bins) {
      covered += bin.count;
      if (bin.count < 30) continue;
      const auto ind = series == &data.home ? home_indicator::home
                                            : home_indicator::away;
      const double fitted = expected_mov(bin.center, ind, truth);
      zscores.push_back(std::abs(bin.mean - fitted) /
                        (bin.stddev / std::sqrt(double(bin.count))));
    }
  }
  CHECK_EQ(covered, 40000);  // every sample lands in an emitted bin
  REQUIRE(!zscores.empty());
  std::sort(zscores.begin(), zscores.end());
  CHECK(zscores[zscores.size() / 2] <= 1.0);  // median |z| under one s.e.
}

TEST_CASE("margin histogram counts, split asymmetry, degenerate case") {
  LeagueSpec spec;
  spec.n_teams = 6;
  spec.n_games = 3000;
  spec.seed = 12;
  spec.params.alpha = 12;
  spec.params.beta = 0.004;
  spec.params.gamma = 0.0;
  spec.params.delta = 4.0;
  spec.params.sigma2 = 121;
  for (int i = 0; i < 6; ++i) spec.skills.push_back(1500.0);
  const auto games = simulate_league(spec);

  const MarginHistogram home =
      export_margin_histogram(games, MarginContext::home);
  const MarginHistogram away =
      export_margin_histogram(games, MarginContext::away);
  long total = 0;
  for (long c : home.counts) total += c;
  CHECK_EQ(total, 3000);
  CHECK_EQ(home.n, 3000);
  // delta > 0 shifts home margins up and away margins down
  CHECK(home.mean > away.mean);
  CHECK(home.mean == doctest::Approx(-away.mean).epsilon(1e-12));
  CHECK(home.bandwidth > 0.0);
  CHECK_FALSE(home.kde.empty());

  // zero noise, one matchup: all mass in a single bin
  LeagueSpec degenerate;
  degenerate.n_teams = 2;
  degenerate.n_games = 50;
  degenerate.params = spec.params;
  degenerate.params.sigma2 = 0.0;
  degenerate.skills = {1500.0, 1500.0};
  const auto fixed = simulate_league(degenerate);
  const MarginHistogram one =
      export_margin_histogram(fixed, MarginContext::home);
  long nonzero_bins = 0;
  for (long c : one.counts) nonzero_bins += c > 0 ? 1 : 0;
  CHECK_EQ(nonzero_bins, 1);
  CHECK_THROWS_AS(export_margin_histogram({}, MarginContext::home),
                  insufficient_data_error);
}

TEST_CASE("atomic_write_text replaces content atomically") {
  const std::string path = temp_dir() + "/out.txt";
  atomic_write_text(path, "first\n");
  atomic_write_text(path, "second\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK_EQ(buf.str(), "second\n");
}
