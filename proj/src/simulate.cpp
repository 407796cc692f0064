#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "movda/errors.hpp"
#include "movda/replay.hpp"

namespace movda {

namespace {

// mt19937_64-backed generator with an implementation-independent normal
// sampler (Marsaglia polar, second variate discarded) so simulated leagues
// are reproducible across standard libraries.
class LeagueRng {
 public:
  explicit LeagueRng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// Howard Hinnant's civil-date algorithms.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return static_cast<long>(era) * 146097L + static_cast<long>(doe);
}

void civil_from_days(long z, int* y, int* m, int* d) {
  const long era = (z >= 0 ? z : z - 146096L) / 146097L;
  const unsigned doe = static_cast<unsigned>(z - era * 146097L);
  const unsigned yoe =
      (doe - doe / 1460u + doe / 36524u - doe / 146096u) / 365u;
  const int year = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365u * yoe + yoe / 4u - yoe / 100u);
  const unsigned mp = (5u * doy + 2u) / 153u;
  *d = static_cast<int>(doy - (153u * mp + 2u) / 5u + 1u);
  *m = static_cast<int>(mp < 10u ? mp + 3u : mp - 9u);
  *y = year + (*m <= 2);
}

std::string format_date(long serial) {
  int y, m, d;
  civil_from_days(serial, &y, &m, &d);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

std::string team_name(int index, int n_teams) {
  const int width = n_teams >= 100 ? 3 : 2;
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%0*d", width, index + 1);
  return buf;
}

}  // namespace

std::vector<GameRecord> simulate_league(const LeagueSpec& spec) {
  if (spec.n_teams < 2) throw config_error("need at least 2 teams");
  if (spec.n_games < 0) throw config_error("n_games must be >= 0");
  spec.params.validate();
  if (spec.skills.size() != static_cast<std::size_t>(spec.n_teams))
    throw config_error("skills list must have one entry per team");
  for (double s : spec.skills)
    if (!std::isfinite(s)) throw config_error("skills must be finite");
  if (spec.step) {
    if (spec.step->team_index < 0 || spec.step->team_index >= spec.n_teams)
      throw config_error("step change team index out of range");
    if (spec.step->at_game < 0)
      throw config_error("step change game index must be >= 0");
    if (!std::isfinite(spec.step->skill_delta))
      throw config_error("step change delta must be finite");
  }

  LeagueRng rng(spec.seed);
  std::vector<double> skills = spec.skills;
  const double sigma = std::sqrt(spec.params.sigma2);

  // circle-method round robin, bye slot when the team count is odd
  const int slots = spec.n_teams + (spec.n_teams % 2);
  std::vector<int> rot(slots);
  std::iota(rot.begin(), rot.end(), 0);
  std::map<std::pair<int, int>, int> meetings;

  std::vector<GameRecord> games;
  games.reserve(static_cast<std::size_t>(spec.n_games));
  long serial = days_from_civil(2000, 1, 1);
  long emitted = 0;

  while (emitted < spec.n_games) {
    for (int p = 0; p < slots / 2 && emitted < spec.n_games; ++p) {
      const int x = rot[p];
      const int y = rot[slots - 1 - p];
      if (x >= spec.n_teams || y >= spec.n_teams) continue;  // bye
      const std::pair<int, int> key{std::min(x, y), std::max(x, y)};
      const int count = meetings[key]++;
      const int home = count % 2 == 0 ? key.first : key.second;
      const int away = home == key.first ? key.second : key.first;

      if (spec.step && emitted == spec.step->at_game)
        skills[spec.step->team_index] += spec.step->skill_delta;

      const double mean = expected_mov(skills[home] - skills[away],
                                       home_indicator::home, spec.params);
      double margin = mean;
      if (sigma > 0.0) {
        int tries = 0;
        do {
          margin = mean + sigma * rng.normal();
        } while (margin == 0.0 && ++tries < 1000);
      }
      if (margin == 0.0)
        throw config_error(
            "simulated margin is exactly zero and cannot be redrawn");

      GameRecord g;
      char id[24];
      std::snprintf(id, sizeof id, "sim-%06ld", emitted + 1);
      g.game_id = id;
      g.date = format_date(serial);
      g.file_order = static_cast<int>(emitted);
      g.season = g.date.substr(0, 4);
      g.home_team = team_name(home, spec.n_teams);
      g.away_team = team_name(away, spec.n_teams);
      // winner's score carries the margin so home - away reproduces the
      // drawn margin without rounding
      if (margin > 0.0) {
        g.home_score = margin;
        g.away_score = 0.0;
      } else {
        g.home_score = 0.0;
        g.away_score = -margin;
      }
      games.push_back(std::move(g));
      ++emitted;
    }
    // rotate all but the first slot
    std::rotate(rot.begin() + 1, rot.end() - 1, rot.end());
    ++serial;
  }
  return games;
}

}  // namespace movda
