#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bmld/brir.hpp"
#include "bmld/room.hpp"
#include "bmld/signal.hpp"
#include "bmld/stimuli.hpp"
#include "bmld/unmasking.hpp"

namespace bmld {

/// Manipulation times of both listening experiments (ms, emission timeline).
inline const std::vector<double> kPaperTimesMs = {15, 20, 45, 75, 150, 250, 500};

struct ConditionSpec {
  std::string id;
  int experiment = 1;  // 1: truncate sweep, 2: cut sweep
  std::string room_id = "paper";
  double alpha = 0.1;
  double target_azimuth_deg = 0.0;
  double target_distance_m = 5.0;
  Manipulation::Mode mode = Manipulation::Mode::truncate;
  double t_ms = 15.0;
};

/// Experiment 1: 2 absorptions x 2 positions x 7 truncations = 28 conditions.
/// Experiment 2: 2 absorptions x 7 cut times at 0 degrees = 14 conditions.
std::vector<ConditionSpec> build_paper_conditions(int experiment);

struct ExperimentConfig {
  double fs = 44100.0;
  std::uint64_t master_seed = 7001;
  double target_onset_s = 0.2;      // target start within the masker
  bool run_fast = true;
  bool run_slow = true;
  int jobs = 1;
  // paper-room scene defaults (the exact poses are not published)
  double receiver_wall_clearance_m = 1.5;
  double receiver_height_m = 1.4;
  // hybrid response
  int ism_max_order = 8;
  double ism_time_cap_s = 0.075;
  ModelConfig model;                // variant field ignored; both run as configured
};

struct ResultRow {
  std::string condition_id;
  int experiment = 0;
  std::string room_id;
  double alpha = 0.0;
  double azimuth_deg = 0.0;
  std::string mode;
  double t_ms = 0.0;
  std::string variant;
  double benefit_db = 0.0;
  double threshold_db = 0.0;  // -benefit (offset-free; evaluate() fits offsets)
  double drr_db = 0.0;
  double rt60_s = 0.0;        // NaN when the decay range is insufficient
  double mean_ic = 0.0;       // steady-state 500 Hz interaural correlation
};

std::vector<ResultRow> run_conditions(const std::vector<ConditionSpec>& conditions,
                                      const ExperimentConfig& cfg);

struct IcPoint {
  double time_s = 0.0;
  double ic = 0.0;
  bool valid = false;
};

/// Short-term interaural correlation of a rendered signal in one auditory
/// band (default: the 500 Hz region of the target).
std::vector<IcPoint> ic_timeseries(const BinauralSignal& s, double band_hz = 500.0,
                                   double window_s = 24e-3);

double mean_ic_between(const std::vector<IcPoint>& series, double t0_s, double t1_s);

/// Scene helpers shared by the CLI and the tests.
struct Scene {
  Room room;
  HeadModel head;
  Vec3 source;
  TailSpec tail;     // rt60/drr targets filled; energies filled at assembly
  bool use_tail = true;
};

/// Paper room with the receiver 1.5 m from the two nearest walls of the
/// narrow corner, facing down the long axis; source on a 5 m radius.
Scene paper_scene(double alpha, double azimuth_deg, const ExperimentConfig& cfg);

/// Generic rectangular-room scene with Eyring RT60 and a room-constant DRR.
Scene shoebox_scene(const Room& room, const Vec3& receiver, double facing_az_deg,
                    double source_az_deg, double source_distance_m, double alpha,
                    std::uint64_t tail_seed);

Rir make_brir(const Scene& scene, const ExperimentConfig& cfg);

/// Steady-state mean interaural correlation of the reverberant target in the
/// 500 Hz band, per manipulation time, averaged over `n_seeds` stochastic
/// tail realizations. The exact image sources are shared across seeds.
std::vector<double> ic_profile(double alpha, double azimuth_deg,
                               Manipulation::Mode mode,
                               const std::vector<double>& times_ms,
                               const ExperimentConfig& cfg, int n_seeds);

struct ReplicationConfig {
  double fs = 44100.0;
  std::uint64_t master_seed = 7001;
  bool run_fast = true;
  bool run_slow = true;
  // braasch
  double braasch_alpha = 0.3;
  bool braasch_reverberant_masker = true;
  std::vector<double> braasch_azimuths_deg = {0.0, 2.0, 20.0};
  // zurek
  std::vector<double> zurek_alphas = {0.1, 0.3, 0.5, 0.7, 0.9};
};

/// Broadband-noise detection in a 5 x 6 x 3 m room, target azimuths
/// 0/2/20 degrees at 2 m, masker at 0 degrees.
std::vector<ResultRow> replicate_braasch(const ReplicationConfig& cfg);

/// Narrowband 500 Hz target at 0 degrees / 1 m in a 4.8 x 6.6 x 2.6 m room,
/// anechoic broadband masker at 60 degrees, absorption sweep.
std::vector<ResultRow> replicate_zurek(const ReplicationConfig& cfg);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       const std::string& manifest_comment);

}  // namespace bmld
