#include "bmld/staircase.hpp"

#include <cmath>

#include "bmld/error.hpp"
#include "bmld/rng.hpp"

namespace bmld {

double levitt_target(int down, int up) {
  if (up != 1 || down < 1) throw ConfigError("levitt_target: unsupported rule");
  return std::pow(0.5, 1.0 / static_cast<double>(down));
}

Observer logistic_observer(double midpoint_db, double target_p, double slope_db,
                           std::uint64_t seed) {
  // chance floor 1/3; shift the sigmoid so p_correct(midpoint) = target_p
  const double floor = 1.0 / 3.0;
  const double q = (target_p - floor) / (1.0 - floor);
  const double shift = slope_db * std::log(q / (1.0 - q));
  Observer obs;
  obs.seed = seed;
  obs.p_correct = [=](double level_db) {
    const double s = 1.0 / (1.0 + std::exp(-(level_db - (midpoint_db - shift)) / slope_db));
    return floor + (1.0 - floor) * s;
  };
  return obs;
}

TrackResult run_track(const Observer& observer, const StaircaseConfig& cfg) {
  if (cfg.step_db.size() != cfg.step_change_reversals.size() + 1) {
    throw ConfigError("run_track: step schedule inconsistent");
  }
  Rng rng(observer.seed);
  const double chance = 1.0 / static_cast<double>(cfg.intervals);

  TrackResult result;
  double level = cfg.start_level_db;
  int correct_in_row = 0;
  int direction = 0;  // +1 up, -1 down, 0 before the first move
  int reversals_total = 0;
  int reversals_at_final = 0;
  const int final_stage = static_cast<int>(cfg.step_db.size()) - 1;
  int trial_index = 0;

  auto stage_of = [&](int reversals) {
    int stage = 0;
    for (std::size_t i = 0; i < cfg.step_change_reversals.size(); ++i) {
      if (reversals >= cfg.step_change_reversals[i]) stage = static_cast<int>(i) + 1;
    }
    return stage;
  };

  while (true) {
    const double p = observer.p_correct(level);
    if (p < chance - 1e-9 || p > 1.0 + 1e-9) {
      throw ConfigError("run_track: observer probability outside [chance, 1]");
    }
    const bool correct = rng.uniform() < p;

    Trial trial;
    trial.index = trial_index++;
    trial.level_db = level;
    trial.correct = correct;
    trial.step_db = cfg.step_db[static_cast<std::size_t>(stage_of(reversals_total))];

    int move = 0;
    if (correct) {
      if (++correct_in_row >= cfg.down) {
        move = -1;
        correct_in_row = 0;
      }
    } else {
      move = +1;
      correct_in_row = 0;
    }

    if (move != 0) {
      const bool is_reversal = direction != 0 && move != direction;
      trial.reversal = is_reversal;
      if (is_reversal) {
        ++reversals_total;
        result.reversal_levels.push_back(level);
        if (stage_of(reversals_total - 1) == final_stage) ++reversals_at_final;
      }
      const double step = cfg.step_db[static_cast<std::size_t>(stage_of(reversals_total))];
      direction = move;
      level += move * step;
    }
    result.trials.push_back(trial);

    if (reversals_at_final >= cfg.final_step_reversals) break;
    if (cfg.max_trials > 0 && trial_index >= cfg.max_trials) {
      result.converged = false;
      break;
    }
  }

  const int n = cfg.reversals_for_threshold;
  const int have = static_cast<int>(result.reversal_levels.size());
  const int use = std::min(n, have);
  double mean = 0.0;
  for (int i = have - use; i < have; ++i) mean += result.reversal_levels[static_cast<std::size_t>(i)] / use;
  result.threshold_db = mean;
  return result;
}

}  // namespace bmld
