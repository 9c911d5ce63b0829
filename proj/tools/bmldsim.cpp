// Command-line front end: room responses, stimuli, model predictions,
// experiment sweeps, literature replications, staircase simulations.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmld/error.hpp"
#include "bmld/experiments.hpp"
#include "bmld/sidecar.hpp"
#include "bmld/staircase.hpp"
#include "bmld/wav.hpp"

using namespace bmld;
using nlohmann::json;

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) fields.push_back(item);
    if (!have_header) {
      t.header = fields;
      have_header = true;
    } else {
      t.rows.push_back(fields);
    }
  }
  return t;
}

Scene scene_for(const std::string& room_id, double alpha, double az, double dist,
                std::uint64_t seed, const ExperimentConfig& ecfg) {
  if (room_id == "paper") {
    Scene s = paper_scene(alpha, az, ecfg);
    if (dist > 0.0) {
      const Vec3 dir = (s.source - s.head.position) / 5.0;
      s.source = s.head.position + dir * dist;
    }
    return s;
  }
  if (room_id == "braasch") {
    return shoebox_scene(braasch_room(alpha), {2.45, 2.2, 1.4}, 0.0, az,
                         dist > 0.0 ? dist : 2.0, alpha, seed);
  }
  if (room_id == "zurek") {
    return shoebox_scene(zurek_room(alpha), {2.0, 2.5, 1.4}, 20.0, az,
                         dist > 0.0 ? dist : 1.0, alpha, seed);
  }
  throw ConfigError("unknown room: " + room_id);
}

std::string manifest_line(const std::string& canonical, std::uint64_t seed) {
  return std::string(kToolVersion) + " config=" + config_hash_hex(canonical) +
         " seed=" + std::to_string(seed);
}

int cmd_rir(const std::string& room_id, double alpha, double az, double dist,
            std::optional<double> truncate_ms, std::optional<double> cut_ms,
            bool binaural, std::uint64_t seed, double fs, int max_order,
            const std::string& out) {
  ExperimentConfig ecfg;
  ecfg.fs = fs;
  ecfg.master_seed = seed;
  ecfg.ism_max_order = max_order;

  Scene scene = scene_for(room_id, alpha, az, dist, seed ^ 0x51ed270b, ecfg);
  scene.tail.seed ^= seed;

  IsmOptions opt;
  opt.max_order = ecfg.ism_max_order;
  opt.max_time_s = ecfg.ism_time_cap_s;
  const ImageSourceSet images =
      compute_image_sources(scene.room, scene.source, scene.head.position, opt);

  TailSpec tail = scene.tail;
  tail.onset_s = ecfg.ism_time_cap_s;
  Rir rir;
  if (binaural) {
    rir = scene.use_tail ? assemble_brir(images, tail, scene.head, fs)
                         : render_images_binaural(images, scene.head, fs);
  } else {
    rir = scene.use_tail ? assemble_rir_omni(images, tail, fs)
                         : synthesize_rir(images, fs, opt.speed_of_sound);
  }
  if (truncate_ms) rir = manipulate_rir(rir, Manipulation::Mode::truncate, *truncate_ms);
  if (cut_ms) rir = manipulate_rir(rir, Manipulation::Mode::cut, *cut_ms);

  WavData wav;
  wav.fs = fs;
  wav.channels = rir.channels;
  write_wav(out, wav);

  const std::string canonical = room_id + "," + std::to_string(alpha) + "," +
                                std::to_string(az) + "," + std::to_string(dist) + "," +
                                rir.manipulation.mode_name() + "," +
                                std::to_string(rir.manipulation.t_ms) + "," +
                                (binaural ? "b" : "o") + "," + std::to_string(fs);
  Sidecar sc;
  sc.room_id = room_id;
  sc.alpha = alpha;
  sc.source_azimuth_deg = az;
  sc.source_distance_m = (scene.source - scene.head.position).norm();
  char pose[96];
  std::snprintf(pose, sizeof(pose), "%.4f,%.4f,%.4f", scene.head.position.x,
                scene.head.position.y, scene.head.position.z);
  sc.receiver_pose = pose;
  sc.max_order = ecfg.ism_max_order;
  sc.manipulation = rir.manipulation;
  sc.tail_seed = rir.tail_seed;
  sc.master_seed = seed;
  sc.t_direct_s = rir.t_direct_s.empty() ? 0.0 : rir.t_direct_s[0];
  sc.fs = fs;
  sc.tool_version = kToolVersion;
  sc.config_hash = config_hash_hex(canonical);
  write_sidecar(out + ".json", sc);

  const RirAnalysis analysis = analyze_rir(rir);
  if (analysis.rt60_s) {
    std::printf("rt60_s=%.4f ", *analysis.rt60_s);
  } else {
    std::printf("rt60_s=insufficient-decay ");
  }
  if (std::isinf(analysis.drr_db)) {
    std::printf("drr_db=inf\n");
  } else {
    std::printf("drr_db=%.2f\n", analysis.drr_db);
  }
  return 0;
}

int cmd_stimulus(const std::string& type, std::uint64_t seed, double fs,
                 const std::string& out) {
  Signal s;
  if (type == "hct") {
    HctSpec spec;
    spec.random_phase = seed != 0;
    spec.phase_seed = seed;
    s = synth_hct(spec, fs);
  } else if (type == "uen") {
    NoiseSpec spec;
    spec.seed = seed;
    s = synth_uen(spec, fs);
  } else {
    throw ConfigError("unknown stimulus type: " + type);
  }
  WavData wav;
  wav.fs = fs;
  wav.channels = {s.samples};
  write_wav(out, wav);
  std::printf("wrote %s (%.3f s, %.1f dB SPL)\n", out.c_str(),
              s.samples.size() / fs, level_db_spl(s));
  return 0;
}

int cmd_predict(const std::string& target_path, const std::string& masker_path,
                const std::string& variant, const std::string& out,
                const std::string& matrices_prefix) {
  const WavData tw = read_wav(target_path);
  const WavData mw = read_wav(masker_path);
  if (tw.channels.size() != 2 || mw.channels.size() != 2) {
    throw ConfigError("predict: target and masker must be 2-channel WAV files");
  }
  BinauralSignal target{tw.channels[0], tw.channels[1], tw.fs};
  BinauralSignal masker{mw.channels[0], mw.channels[1], mw.fs};

  json j;
  for (const std::string v : {"fast", "slow"}) {
    if (variant != "both" && variant != v) continue;
    ModelConfig cfg;
    cfg.variant = v == "fast" ? Variant::fast : Variant::slow;
    const Prediction pred = predict(target, masker, cfg);
    j[v] = {{"benefit_db", pred.benefit_db},
            {"bands", pred.bands},
            {"frames", pred.frames},
            {"frame_hop_s", pred.frame_hop_s}};
    if (!matrices_prefix.empty()) {
      const std::string path = matrices_prefix + "_" + v + ".csv";
      std::ofstream f(path);
      if (!f) throw ConfigError("cannot open " + path);
      f << "band_hz,frame,bmld_db,snr_db,valid\n";
      char buf[160];
      for (std::size_t b = 0; b < pred.bands; ++b) {
        for (std::size_t fr = 0; fr < pred.frames; ++fr) {
          std::snprintf(buf, sizeof(buf), "%.6g,%zu,%.6g,%.6g,%d\n",
                        pred.band_freqs_hz[b], fr, pred.bmld_at(b, fr),
                        pred.snr_at(b, fr), pred.ok(b, fr) ? 1 : 0);
          f << buf;
        }
      }
    }
  }
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    f << j.dump(2) << "\n";
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_experiment(int exp, const std::string& variant, int jobs, std::uint64_t seed,
                   const std::string& out, const std::string& dump_conditions) {
  const auto conditions = build_paper_conditions(exp);
  if (!dump_conditions.empty()) {
    json j = json::array();
    for (const auto& c : conditions) {
      j.push_back({{"id", c.id},
                   {"experiment", c.experiment},
                   {"room", c.room_id},
                   {"alpha", c.alpha},
                   {"azimuth_deg", c.target_azimuth_deg},
                   {"mode", Manipulation{c.mode, c.t_ms}.mode_name()},
                   {"t_ms", c.t_ms}});
    }
    std::ofstream f(dump_conditions);
    if (!f) throw ConfigError("cannot open " + dump_conditions);
    f << j.dump(2) << "\n";
  }

  ExperimentConfig cfg;
  cfg.master_seed = seed;
  cfg.jobs = jobs;
  cfg.run_fast = variant == "fast" || variant == "both";
  cfg.run_slow = variant == "slow" || variant == "both";
  const auto rows = run_conditions(conditions, cfg);

  const std::string canonical =
      "experiment=" + std::to_string(exp) + ",variant=" + variant +
      ",seed=" + std::to_string(seed);
  write_results_csv(out, rows, manifest_line(canonical, seed));
  std::printf("wrote %s (%zu rows)\n", out.c_str(), rows.size());
  return 0;
}

int cmd_replicate(const std::string& study, const std::string& variant,
                  std::uint64_t seed, const std::string& out) {
  ReplicationConfig cfg;
  cfg.master_seed = seed;
  cfg.run_fast = variant == "fast" || variant == "both";
  cfg.run_slow = variant == "slow" || variant == "both";
  std::vector<ResultRow> rows;
  if (study == "braasch") {
    rows = replicate_braasch(cfg);
  } else if (study == "zurek") {
    rows = replicate_zurek(cfg);
  } else {
    throw ConfigError("unknown study: " + study);
  }
  const std::string canonical = "replicate=" + study + ",variant=" + variant +
                                ",seed=" + std::to_string(seed);
  write_results_csv(out, rows, manifest_line(canonical, seed));
  std::printf("wrote %s (%zu rows)\n", out.c_str(), rows.size());
  return 0;
}

int cmd_ic(int exp, double alpha, double az, std::uint64_t seed, const std::string& out) {
  ExperimentConfig cfg;
  cfg.master_seed = seed;
  const Scene scene = paper_scene(alpha, az, cfg);
  const Rir base = make_brir(scene, cfg);
  const HctSpec hct_spec;
  const Signal hct = synth_hct(hct_spec, cfg.fs);
  const Manipulation::Mode mode =
      exp == 1 ? Manipulation::Mode::truncate : Manipulation::Mode::cut;

  std::ofstream f(out);
  if (!f) throw ConfigError("cannot open " + out);
  f << "# " << manifest_line("ic", seed) << "\n";
  f << "t_ms,time_s,ic,valid\n";
  char buf[96];
  for (double t : kPaperTimesMs) {
    const Rir manip = manipulate_rir(base, mode, t);
    const BinauralSignal target = spatialize(hct, manip);
    for (const auto& p : ic_timeseries(target)) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%d\n", t, p.time_s, p.ic,
                    p.valid ? 1 : 0);
      f << buf;
    }
  }
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& data_path,
                 const std::string& out) {
  const CsvTable pred = read_csv(pred_path);
  const CsvTable data = read_csv(data_path);
  const int p_id = pred.column("condition_id");
  const int p_var = pred.column("variant");
  const int p_benefit = pred.column("benefit_db");
  if (p_id < 0 || p_var < 0 || p_benefit < 0) {
    throw ConfigError("prediction CSV needs condition_id, variant, benefit_db");
  }
  const int d_id = data.column("condition_id");
  const int d_thr = data.column("threshold_db");
  if (d_id < 0 || d_thr < 0) {
    throw ConfigError("data CSV needs condition_id, threshold_db");
  }

  std::map<std::string, double> measured;
  for (const auto& row : data.rows) {
    measured[row[static_cast<std::size_t>(d_id)]] =
        std::stod(row[static_cast<std::size_t>(d_thr)]);
  }

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_variant;
  std::vector<std::string> unmatched;
  for (const auto& row : pred.rows) {
    const std::string id = row[static_cast<std::size_t>(p_id)];
    const std::string var = row[static_cast<std::size_t>(p_var)];
    auto it = measured.find(id);
    if (it == measured.end()) {
      unmatched.push_back(id);
      continue;
    }
    per_variant[var].first.push_back(std::stod(row[static_cast<std::size_t>(p_benefit)]));
    per_variant[var].second.push_back(it->second);
  }
  if (per_variant.empty()) {
    for (const auto& id : unmatched) std::fprintf(stderr, "unmatched: %s\n", id.c_str());
    throw ConfigError("evaluate: no rows joined");
  }

  json j;
  for (const auto& [var, series] : per_variant) {
    const EvalResult r = evaluate(series.first, series.second);
    j[var] = {{"n", series.first.size()},
              {"offset_db", r.offset_db},
              {"rmse_db", r.rmse_db},
              {"pearson", r.pearson ? json(*r.pearson) : json()}};
    std::printf("%-5s n=%zu offset=%6.2f dB  RMSE=%5.2f dB  rho=%s\n", var.c_str(),
                series.first.size(), r.offset_db, r.rmse_db,
                r.pearson ? std::to_string(*r.pearson).c_str() : "undefined");
  }
  if (!unmatched.empty()) {
    for (const auto& id : unmatched) std::fprintf(stderr, "unmatched: %s\n", id.c_str());
  }
  if (!out.empty()) {
    std::ofstream f(out);
    f << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_staircase(double midpoint, int tracks, double slope, std::uint64_t seed,
                  const std::string& out) {
  StaircaseConfig cfg;
  const double target = levitt_target(cfg.down, cfg.up);

  std::ofstream f(out);
  if (!f) throw ConfigError("cannot open " + out);
  f << "# " << manifest_line("staircase", seed) << "\n";
  f << "track,trial,level_db,correct,reversal,step_db\n";
  double mean = 0.0;
  char buf[96];
  for (int t = 0; t < tracks; ++t) {
    const Observer obs = logistic_observer(midpoint, target, slope,
                                           seed + static_cast<std::uint64_t>(t));
    const TrackResult r = run_track(obs, cfg);
    mean += r.threshold_db / tracks;
    for (const auto& trial : r.trials) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%d,%d,%.1f\n", t, trial.index,
                    trial.level_db, trial.correct ? 1 : 0, trial.reversal ? 1 : 0,
                    trial.step_db);
      f << buf;
    }
  }
  std::printf("tracks=%d mean_threshold_db=%.3f (target %.1f)\n", tracks, mean, midpoint);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binaural unmasking simulation toolkit"};
  app.require_subcommand(1);

  // rir
  auto* rir = app.add_subcommand("rir", "Simulate a room response and write WAV + sidecar");
  std::string room_id = "paper", out = "out.wav";
  double alpha = 0.1, az = 0.0, dist = 0.0, fs = 44100.0;
  std::optional<double> truncate_ms, cut_ms;
  bool binaural = false;
  std::uint64_t seed = 1;
  int max_order = 8;
  rir->add_option("--room", room_id, "paper|braasch|zurek");
  rir->add_option("--alpha", alpha, "absorption coefficient");
  rir->add_option("--src-az", az, "source azimuth (deg, ccw)");
  rir->add_option("--src-dist", dist, "source distance (m; 0 = room default)");
  rir->add_option("--truncate", truncate_ms, "truncate after t (ms)");
  rir->add_option("--cut", cut_ms, "cut early reflections up to t (ms)");
  rir->add_flag("--binaural", binaural, "two-ear rendering (default omni)");
  rir->add_option("--seed", seed, "seed");
  rir->add_option("--fs", fs, "sample rate");
  rir->add_option("--max-order", max_order, "image source order cap");
  rir->add_option("-o,--out", out, "output WAV path");

  // stimulus
  auto* stim = app.add_subcommand("stimulus", "Synthesize the target or masker stimulus");
  std::string stim_type = "hct", stim_out = "stimulus.wav";
  std::uint64_t stim_seed = 0;
  double stim_fs = 44100.0;
  stim->add_option("--type", stim_type, "hct|uen");
  stim->add_option("--seed", stim_seed, "seed (hct: 0 = zero phases)");
  stim->add_option("--fs", stim_fs, "sample rate");
  stim->add_option("-o,--out", stim_out, "output WAV path");

  // predict
  auto* pred = app.add_subcommand("predict", "Run the model on target/masker WAV files");
  std::string target_path, masker_path, pred_variant = "both", pred_out, matrices;
  pred->add_option("--target", target_path, "2-channel target WAV")->required();
  pred->add_option("--masker", masker_path, "2-channel masker WAV")->required();
  pred->add_option("--variant", pred_variant, "fast|slow|both");
  pred->add_option("-o,--out", pred_out, "JSON output (default stdout)");
  pred->add_option("--matrices", matrices, "CSV matrix dump prefix");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a full condition sweep");
  int exp_num = 1, exp_jobs = 1;
  std::string exp_variant = "both", exp_out = "results.csv", dump_conditions;
  std::uint64_t exp_seed = 7001;
  exp->add_option("--exp", exp_num, "1|2")->required();
  exp->add_option("--variant", exp_variant, "fast|slow|both");
  exp->add_option("--jobs", exp_jobs, "parallel groups");
  exp->add_option("--seed", exp_seed, "master seed");
  exp->add_option("-o,--out", exp_out, "results CSV");
  exp->add_option("--dump-conditions", dump_conditions, "write condition list JSON");

  // replicate
  auto* rep = app.add_subcommand("replicate", "Literature replications");
  std::string rep_study = "braasch", rep_variant = "both", rep_out = "replication.csv";
  std::uint64_t rep_seed = 7001;
  rep->add_option("--study", rep_study, "braasch|zurek")->required();
  rep->add_option("--variant", rep_variant, "fast|slow|both");
  rep->add_option("--seed", rep_seed, "master seed");
  rep->add_option("-o,--out", rep_out, "results CSV");

  // ic
  auto* ic = app.add_subcommand("ic", "Interaural correlation time series per condition");
  int ic_exp = 1;
  double ic_alpha = 0.1, ic_az = 0.0;
  std::uint64_t ic_seed = 7001;
  std::string ic_out = "ic.csv";
  ic->add_option("--exp", ic_exp, "1: truncate sweep, 2: cut sweep");
  ic->add_option("--alpha", ic_alpha, "absorption");
  ic->add_option("--az", ic_az, "target azimuth (deg)");
  ic->add_option("--seed", ic_seed, "master seed");
  ic->add_option("-o,--out", ic_out, "output CSV");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Compare predictions against measured data");
  std::string eval_pred, eval_data, eval_out;
  eval->add_option("--pred", eval_pred, "prediction CSV")->required();
  eval->add_option("--data", eval_data, "measured CSV (condition_id,threshold_db)")->required();
  eval->add_option("-o,--out", eval_out, "metrics JSON");

  // staircase
  auto* stair = app.add_subcommand("staircase", "Simulate adaptive tracks");
  double st_mid = 40.0, st_slope = 2.0;
  int st_tracks = 100;
  std::uint64_t st_seed = 1;
  std::string st_out = "tracks.csv";
  stair->add_option("--midpoint", st_mid, "observer 70.7% point (dB)");
  stair->add_option("--slope", st_slope, "psychometric slope (dB)");
  stair->add_option("--tracks", st_tracks, "number of tracks");
  stair->add_option("--seed", st_seed, "seed");
  stair->add_option("-o,--out", st_out, "trial log CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rir->parsed()) {
      return cmd_rir(room_id, alpha, az, dist, truncate_ms, cut_ms, binaural, seed, fs,
                     max_order, out);
    }
    if (stim->parsed()) return cmd_stimulus(stim_type, stim_seed, stim_fs, stim_out);
    if (pred->parsed()) {
      return cmd_predict(target_path, masker_path, pred_variant, pred_out, matrices);
    }
    if (exp->parsed()) {
      return cmd_experiment(exp_num, exp_variant, exp_jobs, exp_seed, exp_out,
                            dump_conditions);
    }
    if (rep->parsed()) return cmd_replicate(rep_study, rep_variant, rep_seed, rep_out);
    if (ic->parsed()) return cmd_ic(ic_exp, ic_alpha, ic_az, ic_seed, ic_out);
    if (eval->parsed()) return cmd_evaluate(eval_pred, eval_data, eval_out);
    if (stair->parsed()) return cmd_staircase(st_mid, st_tracks, st_slope, st_seed, st_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  }
  return 0;
}
