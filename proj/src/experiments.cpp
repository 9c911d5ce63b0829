#include "bmld/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <thread>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"
#include "bmld/image_source.hpp"
#include "bmld/rng.hpp"

namespace bmld {

namespace {

std::string format_t(double t_ms) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03d", static_cast<int>(std::llround(t_ms)));
  return buf;
}

std::string condition_id(int exp, double alpha, double az, Manipulation::Mode mode,
                         double t_ms) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "exp%d_a%.1f_az%02d_%s%s", exp, alpha,
                static_cast<int>(std::llround(az)),
                mode == Manipulation::Mode::truncate ? "tr" : "cut",
                format_t(t_ms).c_str());
  return buf;
}

}  // namespace

std::vector<ConditionSpec> build_paper_conditions(int experiment) {
  if (experiment != 1 && experiment != 2) {
    throw ConfigError("build_paper_conditions: experiment must be 1 or 2");
  }
  const std::vector<double> alphas = {0.1, 0.5};
  const std::vector<double> azimuths =
      experiment == 1 ? std::vector<double>{0.0, 60.0} : std::vector<double>{0.0};
  const Manipulation::Mode mode =
      experiment == 1 ? Manipulation::Mode::truncate : Manipulation::Mode::cut;

  std::vector<ConditionSpec> out;
  for (double alpha : alphas) {
    for (double az : azimuths) {
      for (double t : kPaperTimesMs) {
        ConditionSpec c;
        c.experiment = experiment;
        c.alpha = alpha;
        c.target_azimuth_deg = az;
        c.mode = mode;
        c.t_ms = t;
        c.id = condition_id(experiment, alpha, az, mode, t);
        out.push_back(c);
      }
    }
  }
  return out;
}

namespace {

Plane wall_mean_plane(const Room& room, int wall_index) {
  const auto& wall = room.walls[static_cast<std::size_t>(wall_index)];
  const Plane p0 = room.triangles[static_cast<std::size_t>(wall.triangles[0])].plane();
  const Plane p1 = room.triangles[static_cast<std::size_t>(wall.triangles[1])].plane();
  Vec3 n = (p0.normal + p1.normal).normalized();
  const double d = 0.5 * (p0.offset + p1.offset);
  return {n, d};
}

Vec3 rotate_about_z(const Vec3& v, double angle_rad) {
  return {v.x * std::cos(angle_rad) - v.y * std::sin(angle_rad),
          v.x * std::sin(angle_rad) + v.y * std::cos(angle_rad), v.z};
}

/// DRR of a source at distance d from room-constant diffuse theory.
double room_constant_drr(const Room& room, double alpha, double distance_m) {
  const double rc = room.surface_area() * alpha / (1.0 - alpha);
  return 10.0 * std::log10(rc / (16.0 * kPi * distance_m * distance_m));
}

std::uint64_t scene_tail_seed(std::uint64_t master, const std::string& room_id,
                              double alpha, double azimuth_deg) {
  std::uint64_t h = master ^ 0x9e3779b97f4a7c15ULL;
  for (char c : room_id) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ULL;
  h ^= static_cast<std::uint64_t>(std::llround(alpha * 1000.0)) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::uint64_t>(std::llround(azimuth_deg * 10.0) + 3600) * 0xc2b2ae3d27d4eb4fULL;
  return h;
}

}  // namespace

Scene paper_scene(double alpha, double azimuth_deg, const ExperimentConfig& cfg) {
  Scene scene;
  scene.room = paper_room(alpha);

  // Receiver: clearance from the west and north wall planes, z fixed.
  const Plane west = wall_mean_plane(scene.room, 2);
  const Plane north = wall_mean_plane(scene.room, 3);
  const double z = cfg.receiver_height_m;
  const double c1 = west.offset + cfg.receiver_wall_clearance_m - west.normal.z * z;
  const double c2 = north.offset + cfg.receiver_wall_clearance_m - north.normal.z * z;
  const double det = west.normal.x * north.normal.y - west.normal.y * north.normal.x;
  Vec3 rcv{(c1 * north.normal.y - west.normal.y * c2) / det,
           (west.normal.x * c2 - c1 * north.normal.x) / det, z};

  scene.head.position = rcv;
  scene.head.facing = {0.0, -1.0, 0.0};  // down the long axis
  scene.source = rcv + rotate_about_z(scene.head.facing, azimuth_deg * kPi / 180.0) * 5.0;

  // Published targets for the two tested absorptions; Eyring + diffuse-field
  // fallback otherwise (the paper values disagree with Eyring; see README).
  scene.tail.seed = scene_tail_seed(cfg.master_seed, "paper", alpha, azimuth_deg);
  const bool front = std::abs(azimuth_deg) < 30.0;
  if (std::abs(alpha - 0.1) < 1e-9) {
    scene.tail.rt60_s = 0.736;
    scene.tail.drr_db = front ? -11.8 : -12.3;
  } else if (std::abs(alpha - 0.5) < 1e-9) {
    scene.tail.rt60_s = 0.302;
    scene.tail.drr_db = front ? -4.2 : -4.9;
  } else {
    scene.tail.rt60_s = scene.room.eyring_rt60(alpha);
    scene.tail.drr_db = room_constant_drr(scene.room, alpha, 5.0);
  }
  scene.tail.head_radius_m = scene.head.radius_m;
  return scene;
}

Scene shoebox_scene(const Room& room, const Vec3& receiver, double facing_az_deg,
                    double source_az_deg, double source_distance_m, double alpha,
                    std::uint64_t tail_seed) {
  Scene scene;
  scene.room = room;
  scene.head.position = receiver;
  scene.head.facing = rotate_about_z({0.0, 1.0, 0.0}, facing_az_deg * kPi / 180.0);
  scene.source = receiver + rotate_about_z(scene.head.facing,
                                           source_az_deg * kPi / 180.0) * source_distance_m;
  scene.tail.seed = tail_seed;
  if (alpha >= 0.999) {
    scene.use_tail = false;  // fully absorbing: direct sound only
    scene.tail.rt60_s = 1.0;
    scene.tail.drr_db = 60.0;
  } else {
    scene.tail.rt60_s = room.eyring_rt60(alpha);
    scene.tail.drr_db = room_constant_drr(room, alpha, source_distance_m);
  }
  return scene;
}

Rir make_brir(const Scene& scene, const ExperimentConfig& cfg) {
  IsmOptions opt;
  opt.max_order = cfg.ism_max_order;
  opt.max_time_s = cfg.ism_time_cap_s;
  const ImageSourceSet images =
      compute_image_sources(scene.room, scene.source, scene.head.position, opt);
  if (!scene.use_tail) {
    return render_images_binaural(images, scene.head, cfg.fs);
  }
  TailSpec spec = scene.tail;
  spec.onset_s = cfg.ism_time_cap_s;
  return assemble_brir(images, spec, scene.head, cfg.fs);
}

std::vector<double> ic_profile(double alpha, double azimuth_deg,
                               Manipulation::Mode mode,
                               const std::vector<double>& times_ms,
                               const ExperimentConfig& cfg, int n_seeds) {
  Scene scene = paper_scene(alpha, azimuth_deg, cfg);
  IsmOptions opt;
  opt.max_order = cfg.ism_max_order;
  opt.max_time_s = cfg.ism_time_cap_s;
  const ImageSourceSet images =
      compute_image_sources(scene.room, scene.source, scene.head.position, opt);
  HctSpec hct_spec;
  const Signal hct = synth_hct(hct_spec, cfg.fs);

  std::vector<double> mean_ic(times_ms.size(), 0.0);
  for (int s = 0; s < n_seeds; ++s) {
    TailSpec tail = scene.tail;
    tail.onset_s = cfg.ism_time_cap_s;
    tail.seed = scene.tail.seed + 7919ULL * static_cast<std::uint64_t>(s);
    const Rir base = assemble_brir(images, tail, scene.head, cfg.fs);

    std::vector<BinauralSignal> targets;
    for (double t : times_ms) {
      targets.push_back(spatialize(hct, manipulate_rir(base, mode, t)));
    }
    normalize_across_conditions(targets);
    for (std::size_t i = 0; i < times_ms.size(); ++i) {
      const auto series = ic_timeseries(targets[i], 500.0, 48e-3);
      mean_ic[i] += mean_ic_between(series, 0.10, 0.48) / n_seeds;
    }
  }
  return mean_ic;
}

std::vector<IcPoint> ic_timeseries(const BinauralSignal& s, double band_hz,
                                   double window_s) {
  FilterbankSpec fb;
  fb.center_freqs_hz = {band_hz};
  const FrameGrid grid = FrameGrid::over(s.length(), s.fs, window_s);
  const CueMatrix cues = extract_cues(s, fb, grid);
  std::vector<IcPoint> out(grid.count);
  for (std::size_t f = 0; f < grid.count; ++f) {
    out[f].time_s = grid.frame_center_s(f);
    out[f].ic = cues.at(0, f).coherence;
    out[f].valid = cues.at(0, f).valid;
  }
  return out;
}

double mean_ic_between(const std::vector<IcPoint>& series, double t0_s, double t1_s) {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& p : series) {
    if (!p.valid || p.time_s < t0_s || p.time_s > t1_s) continue;
    acc += p.ic;
    ++n;
  }
  if (n == 0) throw NumericError("mean_ic_between: no valid frames in window");
  return acc / static_cast<double>(n);
}

namespace {

BinauralSignal delayed(const BinauralSignal& s, double delay_s) {
  const std::size_t shift = static_cast<std::size_t>(std::llround(delay_s * s.fs));
  BinauralSignal out;
  out.fs = s.fs;
  out.left.assign(shift, 0.0);
  out.right.assign(shift, 0.0);
  out.left.insert(out.left.end(), s.left.begin(), s.left.end());
  out.right.insert(out.right.end(), s.right.begin(), s.right.end());
  return out;
}

/// Presentation gate: an interval plays the masker for its effective
/// duration; the model sees nothing outside it. Gating the target alongside
/// removes the degenerate cue of reverberation ringing past the noise
/// (detection in silence), which the measured thresholds do not contain.
void gate_interval(BinauralSignal& s, double t0_s, double t1_s) {
  const long a = std::max<long>(0, static_cast<long>(std::llround(t0_s * s.fs)));
  const long b = static_cast<long>(std::llround(t1_s * s.fs));
  for (long i = 0; i < static_cast<long>(s.left.size()); ++i) {
    if (i < a || i >= b) {
      s.left[static_cast<std::size_t>(i)] = 0.0;
      s.right[static_cast<std::size_t>(i)] = 0.0;
    }
  }
}

/// Time span where a ramped noise presented through a direct path stays at or
/// above 90% of its envelope maximum.
struct Gate {
  double t0_s = 0.0, t1_s = 0.0;
};
Gate masker_gate(double duration_s, double ramp_s, double path_delay_s) {
  const double sigma = ramp_s / 2.5;
  const double d90 = sigma * std::sqrt(2.0 * std::log(10.0 / 9.0));
  return {path_delay_s + 3.0 * sigma - d90, path_delay_s + duration_s - 3.0 * sigma + d90};
}

struct SharedStimuli {
  Signal hct;
  BinauralSignal masker;  // anechoic UEN from the front at 2.4 m, 60 dB SPL
  Gate gate;              // effective masker span; the interval window
};

SharedStimuli make_shared_stimuli(const ExperimentConfig& cfg) {
  SharedStimuli sh;
  HctSpec hct;
  sh.hct = synth_hct(hct, cfg.fs);

  NoiseSpec uen;
  uen.seed = cfg.master_seed ^ 0x5bd1e995u;
  const Signal noise = synth_uen(uen, cfg.fs);
  HeadModel head;  // masker incidence only depends on relative azimuth
  const Rir masker_brir = render_point_source(0.0, 2.4, head, cfg.fs);
  sh.masker = spatialize(noise, masker_brir);
  set_level_db_spl(sh.masker, uen.level_db_spl);
  sh.gate = masker_gate(uen.duration_s, uen.ramp_s, 2.4 / 343.0);
  gate_interval(sh.masker, sh.gate.t0_s, sh.gate.t1_s);
  return sh;
}

ResultRow base_row(const ConditionSpec& c) {
  ResultRow row;
  row.condition_id = c.id;
  row.experiment = c.experiment;
  row.room_id = c.room_id;
  row.alpha = c.alpha;
  row.azimuth_deg = c.target_azimuth_deg;
  row.mode = Manipulation{c.mode, c.t_ms}.mode_name();
  row.t_ms = c.t_ms;
  return row;
}

}  // namespace

std::vector<ResultRow> run_conditions(const std::vector<ConditionSpec>& conditions,
                                      const ExperimentConfig& cfg) {
  // Group by shared base response and normalization sweep.
  struct GroupKey {
    int experiment;
    double alpha, azimuth;
    Manipulation::Mode mode;
    bool operator<(const GroupKey& o) const {
      return std::tie(experiment, alpha, azimuth, mode) <
             std::tie(o.experiment, o.alpha, o.azimuth, o.mode);
    }
  };
  std::map<GroupKey, std::vector<ConditionSpec>> groups;
  for (const auto& c : conditions) {
    if (c.room_id != "paper") {
      throw ConfigError("run_conditions: only the paper room is wired here");
    }
    groups[{c.experiment, c.alpha, c.target_azimuth_deg, c.mode}].push_back(c);
  }

  const SharedStimuli shared = make_shared_stimuli(cfg);

  // Base responses are shared between experiments (same room, same poses).
  std::map<std::pair<double, double>, Rir> brir_cache;
  for (const auto& [key, specs] : groups) {
    brir_cache.emplace(std::make_pair(key.alpha, key.azimuth), Rir{});
  }
  {
    std::vector<std::future<void>> prep;
    for (auto& [key, slot] : brir_cache) {
      prep.push_back(std::async(cfg.jobs > 1 ? std::launch::async : std::launch::deferred,
                                [&cfg, key = key, &slot]() {
                                  const Scene scene = paper_scene(key.first, key.second, cfg);
                                  slot = make_brir(scene, cfg);
                                }));
    }
    for (auto& p : prep) p.get();
  }

  auto run_group = [&](std::vector<ConditionSpec> specs) {
    std::vector<ResultRow> rows;
    const Rir& base =
        brir_cache.at({specs.front().alpha, specs.front().target_azimuth_deg});

    // The full response (truncate 500 / cut 15) leads so both experiments
    // normalize to the same physical reference energy.
    std::sort(specs.begin(), specs.end(), [](const ConditionSpec& a, const ConditionSpec& b) {
      return a.mode == Manipulation::Mode::truncate ? a.t_ms > b.t_ms : a.t_ms < b.t_ms;
    });

    std::vector<Rir> manipulated;
    std::vector<BinauralSignal> targets;
    for (const auto& c : specs) {
      Rir m = manipulate_rir(base, c.mode, c.t_ms);
      targets.push_back(spatialize(shared.hct, m));
      manipulated.push_back(std::move(m));
    }
    normalize_across_conditions(targets);

    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto& c = specs[i];
      BinauralSignal target = delayed(targets[i], cfg.target_onset_s);
      gate_interval(target, 0.0, shared.gate.t1_s);
      const RirAnalysis analysis = analyze_rir(manipulated[i]);
      const auto ic = ic_timeseries(target, 500.0, 48e-3);
      const double ss0 = cfg.target_onset_s + 0.10;
      const double ss1 = cfg.target_onset_s + 0.48;

      for (int v = 0; v < 2; ++v) {
        if (v == 0 && !cfg.run_fast) continue;
        if (v == 1 && !cfg.run_slow) continue;
        ModelConfig mc = cfg.model;
        mc.variant = v == 0 ? Variant::fast : Variant::slow;
        const Prediction pred = predict(target, shared.masker, mc);

        ResultRow row = base_row(c);
        row.variant = variant_name(mc.variant);
        row.benefit_db = pred.benefit_db;
        row.threshold_db = -pred.benefit_db;
        row.drr_db = analysis.drr_db;
        row.rt60_s = analysis.rt60_s.value_or(std::numeric_limits<double>::quiet_NaN());
        row.mean_ic = mean_ic_between(ic, ss0, ss1);
        rows.push_back(std::move(row));
      }
    }
    return rows;
  };

  std::vector<std::vector<ConditionSpec>> ordered;
  for (auto& [key, specs] : groups) ordered.push_back(specs);

  std::vector<std::vector<ResultRow>> partial(ordered.size());
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t g = 0; g < ordered.size(); ++g) partial[g] = run_group(ordered[g]);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t g = next.fetch_add(1);
        if (g >= ordered.size()) break;
        partial[g] = run_group(ordered[g]);
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min<int>(jobs, static_cast<int>(ordered.size())); ++j) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  for (auto& p : partial) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

namespace {

std::vector<ResultRow> predict_rows(const BinauralSignal& target,
                                    const BinauralSignal& masker, ResultRow base,
                                    bool run_fast, bool run_slow,
                                    const ModelConfig& model) {
  std::vector<ResultRow> rows;
  for (int v = 0; v < 2; ++v) {
    if (v == 0 && !run_fast) continue;
    if (v == 1 && !run_slow) continue;
    ModelConfig mc = model;
    mc.variant = v == 0 ? Variant::fast : Variant::slow;
    const Prediction pred = predict(target, masker, mc);
    ResultRow row = base;
    row.variant = variant_name(mc.variant);
    row.benefit_db = pred.benefit_db;
    row.threshold_db = -pred.benefit_db;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> replicate_braasch(const ReplicationConfig& cfg) {
  ExperimentConfig ecfg;
  ecfg.fs = cfg.fs;
  ecfg.master_seed = cfg.master_seed;

  const Room room = braasch_room(cfg.braasch_alpha);
  const Vec3 receiver{2.45, 2.2, 1.4};
  const double dist = 2.0;

  const Signal target_noise =
      synth_bandpass_noise(200.0, 14000.0, 0.5, 10e-3, 60.0, cfg.master_seed ^ 0xb5297a4dULL, cfg.fs);
  const Signal masker_noise =
      synth_bandpass_noise(200.0, 14000.0, 0.9, 30e-3, 60.0, cfg.master_seed ^ 0x68e31da4ULL, cfg.fs);

  // Masker at 0 degrees, by default rendered in the same room.
  BinauralSignal masker;
  if (cfg.braasch_reverberant_masker) {
    const Scene ms = shoebox_scene(room, receiver, 0.0, 0.0, dist, cfg.braasch_alpha,
                                   scene_tail_seed(cfg.master_seed, "braasch", cfg.braasch_alpha, 0.0));
    masker = spatialize(masker_noise, make_brir(ms, ecfg));
  } else {
    HeadModel head;
    head.position = receiver;
    head.facing = {0.0, 1.0, 0.0};
    masker = spatialize(masker_noise, render_point_source(0.0, dist, head, cfg.fs));
  }
  set_level_db_spl(masker, 60.0);
  const Gate gate = masker_gate(0.9, 30e-3, dist / 343.0);
  gate_interval(masker, gate.t0_s, gate.t1_s);

  std::vector<ResultRow> rows;
  for (double az : cfg.braasch_azimuths_deg) {
    const Scene ts = shoebox_scene(room, receiver, 0.0, az, dist, cfg.braasch_alpha,
                                   scene_tail_seed(cfg.master_seed, "braasch", cfg.braasch_alpha, az));
    BinauralSignal target = delayed(spatialize(target_noise, make_brir(ts, ecfg)), 0.2);
    gate_interval(target, 0.0, gate.t1_s);

    ResultRow base;
    base.condition_id = "braasch_az" + format_t(az);
    base.experiment = 0;
    base.room_id = "braasch";
    base.alpha = cfg.braasch_alpha;
    base.azimuth_deg = az;
    base.mode = "none";
    auto r = predict_rows(target, masker, base, cfg.run_fast, cfg.run_slow, ModelConfig{});
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

std::vector<ResultRow> replicate_zurek(const ReplicationConfig& cfg) {
  ExperimentConfig ecfg;
  ecfg.fs = cfg.fs;
  ecfg.master_seed = cfg.master_seed;

  const Vec3 receiver{4.8 - 2.8, 2.5, 1.4};
  const double facing_az = 20.0;  // listener turned to the left
  const double third_octave = std::pow(2.0, 1.0 / 6.0);

  const Signal target_noise = synth_bandpass_noise(
      500.0 / third_octave, 500.0 * third_octave, 0.5, 10e-3, 60.0,
      cfg.master_seed ^ 0x1b56c4e9ULL, cfg.fs);
  const Signal masker_noise = synth_bandpass_noise(
      200.0, 8000.0, 0.9, 30e-3, 60.0, cfg.master_seed ^ 0x7feb352dULL, cfg.fs);

  // Anechoic broadband masker at +60 degrees, 1 m.
  HeadModel head;
  head.position = receiver;
  head.facing = rotate_about_z({0.0, 1.0, 0.0}, facing_az * kPi / 180.0);
  BinauralSignal masker = spatialize(masker_noise, render_point_source(60.0, 1.0, head, cfg.fs));
  set_level_db_spl(masker, 60.0);
  const Gate gate = masker_gate(0.9, 30e-3, 1.0 / 343.0);
  gate_interval(masker, gate.t0_s, gate.t1_s);

  std::vector<ResultRow> rows;
  for (double alpha : cfg.zurek_alphas) {
    const Room room = zurek_room(alpha);
    const Scene ts = shoebox_scene(room, receiver, facing_az, 0.0, 1.0, alpha,
                                   scene_tail_seed(cfg.master_seed, "zurek", alpha, 0.0));
    BinauralSignal target = delayed(spatialize(target_noise, make_brir(ts, ecfg)), 0.2);
    gate_interval(target, 0.0, gate.t1_s);

    ResultRow base;
    char id[48];
    std::snprintf(id, sizeof(id), "zurek_a%.1f", alpha);
    base.condition_id = id;
    base.experiment = 0;
    base.room_id = "zurek";
    base.alpha = alpha;
    base.azimuth_deg = 0.0;
    base.mode = "none";
    auto r = predict_rows(target, masker, base, cfg.run_fast, cfg.run_slow, ModelConfig{});
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       const std::string& manifest_comment) {
  std::ofstream f(path);
  if (!f) throw ConfigError("write_results_csv: cannot open " + path);
  if (!manifest_comment.empty()) f << "# " << manifest_comment << "\n";
  f << "experiment,condition_id,room,alpha,azimuth_deg,mode,t_ms,variant,benefit_db,"
       "threshold_db,drr_db,rt60_s,mean_ic\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%s,%.6g,%.6g,%s,%.6g,%s,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  r.experiment, r.condition_id.c_str(), r.room_id.c_str(), r.alpha,
                  r.azimuth_deg, r.mode.c_str(), r.t_ms, r.variant.c_str(), r.benefit_db,
                  r.threshold_db, r.drr_db, r.rt60_s, r.mean_ic);
    f << buf;
  }
}

}  // namespace bmld
