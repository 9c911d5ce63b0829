#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bmld {

/// Three-interval three-alternative forced choice, two-down/one-up, tracking
/// the 70.7% point: start at 65 dB SPL, steps 5 -> 2 (after the 1st reversal)
/// -> 1 dB (from the 4th), stop after 12 reversals at the final step size,
/// threshold = mean of the last 10 reversal levels.
struct StaircaseConfig {
  int intervals = 3;
  int down = 2, up = 1;
  double start_level_db = 65.0;
  std::vector<double> step_db = {5.0, 2.0, 1.0};
  std::vector<int> step_change_reversals = {1, 4};  // reversal counts switching steps
  int final_step_reversals = 12;
  int reversals_for_threshold = 10;
  int max_trials = 0;  // 0: no cap
};

/// Simulated listener: probability of a correct interval choice at a given
/// target level. Chance floor is 1/intervals.
struct Observer {
  std::function<double(double level_db)> p_correct;
  std::uint64_t seed = 0;
};

/// Logistic observer with p_correct(midpoint_db) = target_p (e.g. the Levitt
/// 70.7% convergence point), slope in dB.
Observer logistic_observer(double midpoint_db, double target_p, double slope_db,
                           std::uint64_t seed);

struct Trial {
  int index = 0;
  double level_db = 0.0;
  bool correct = false;
  bool reversal = false;
  double step_db = 0.0;
};

struct TrackResult {
  double threshold_db = 0.0;
  std::vector<Trial> trials;
  std::vector<double> reversal_levels;
  bool converged = true;  // false only when the optional trial cap was hit
};

TrackResult run_track(const Observer& observer, const StaircaseConfig& cfg);

/// Convergence probability of a transformed up-down rule: (1/2)^(1/down).
double levitt_target(int down, int up = 1);

}  // namespace bmld
