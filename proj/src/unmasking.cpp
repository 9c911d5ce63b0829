#include "bmld/unmasking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"

namespace bmld {

double k_factor(double freq_hz, double sigma_epsilon, double sigma_delta_s) {
  const double w = 2.0 * kPi * freq_hz;
  return (1.0 + sigma_epsilon * sigma_epsilon) *
         std::exp(w * w * sigma_delta_s * sigma_delta_s);
}

double bmld_ratio(double phi_target, double phi_masker, double rho_masker,
                  double freq_hz, double sigma_epsilon, double sigma_delta_s) {
  const double k = k_factor(freq_hz, sigma_epsilon, sigma_delta_s);
  const double ratio = (k - std::cos(phi_target - phi_masker)) / (k - rho_masker);
  return std::max(1.0, ratio);
}

SnrSeries better_ear_snr_series(const CueMatrix& target, const CueMatrix& masker,
                                double snr_tau_s, double hop_s) {
  if (target.bands != masker.bands || target.frames != masker.frames) {
    throw ConfigError("better_ear_snr_series: cue grids differ");
  }
  SnrSeries out;
  out.bands = target.bands;
  out.frames = target.frames;
  out.snr_db.resize(out.bands * out.frames);
  out.valid.resize(out.bands * out.frames);

  const double beta = std::exp(-hop_s / snr_tau_s);
  for (std::size_t b = 0; b < out.bands; ++b) {
    double y = 0.0;
    for (std::size_t f = 0; f < out.frames; ++f) {
      const auto& t = target.at(b, f);
      const auto& m = masker.at(b, f);
      const std::size_t idx = b * out.frames + f;
      if (!m.valid) {
        // silent masker: flagged, integrator holds
        out.valid[idx] = 0;
        out.snr_db[idx] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const double ratio =
          std::max(t.power_left / m.power_left, t.power_right / m.power_right);
      y = beta * y + (1.0 - beta) * ratio;
      out.valid[idx] = 1;
      out.snr_db[idx] = y > 0.0 ? 10.0 * std::log10(y)
                                : -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

namespace {

/// Slow-variant BMLD: cues on 300 ms Hanning frames right after the
/// filterbank, converted to dB per slow frame, held onto the fast grid.
std::vector<double> slow_bmld_db_for_band(const BinauralSignal& target,
                                          const BinauralSignal& masker, double fc,
                                          const ModelConfig& cfg,
                                          const FrameGrid& fast_grid,
                                          std::size_t padded_len) {
  FrameGrid slow = FrameGrid::over(padded_len, target.fs, cfg.slow_window_s);
  if (slow.count == 0) slow.count = 1;

  FilterbankSpec single;
  single.center_freqs_hz = {fc};
  CueMatrix ct = extract_cues(target, single, slow);
  CueMatrix cm = extract_cues(masker, single, slow);

  std::vector<double> slow_db(slow.count, 0.0);
  for (std::size_t j = 0; j < slow.count; ++j) {
    const auto& t = ct.at(0, j);
    const auto& m = cm.at(0, j);
    const double ratio = (t.valid && m.valid)
                             ? bmld_ratio(t.phase, m.phase, m.coherence, fc,
                                          cfg.sigma_epsilon, cfg.sigma_delta_s)
                             : 1.0;
    slow_db[j] = 10.0 * std::log10(ratio);
  }

  // zero-order hold: each slow value applies from its frame center until the
  // next one.
  std::vector<double> held(fast_grid.count, slow_db.front());
  std::size_t j = 0;
  for (std::size_t f = 0; f < fast_grid.count; ++f) {
    const double tc = fast_grid.frame_center_s(f);
    while (j + 1 < slow.count && slow.frame_center_s(j + 1) <= tc) ++j;
    held[f] = slow_db[j];
  }
  return held;
}

}  // namespace

Prediction predict(const BinauralSignal& target, const BinauralSignal& masker,
                   const ModelConfig& cfg) {
  if (target.fs != masker.fs) throw ConfigError("predict: sample rate mismatch");
  const double fs = target.fs;

  BinauralSignal t = target, m = masker;
  const std::size_t n = std::max(t.length(), m.length());
  t.left.resize(n, 0.0);
  t.right.resize(n, 0.0);
  m.left.resize(n, 0.0);
  m.right.resize(n, 0.0);

  ModelConfig cfg_used = cfg;
  if (cfg_used.filterbank.center_freqs_hz.empty()) {
    cfg_used.filterbank = FilterbankSpec::bark_grid(fs);
  }
  const auto& fb = cfg_used.filterbank;

  const FrameGrid grid = FrameGrid::over(n, fs, cfg_used.fast_window_s);
  if (grid.count == 0) throw ConfigError("predict: input shorter than one frame");
  const double hop_s = static_cast<double>(grid.hop) / fs;

  const CueMatrix cues_t = extract_cues(t, fb, grid);
  const CueMatrix cues_m = extract_cues(m, fb, grid);
  const SnrSeries snr = better_ear_snr_series(cues_t, cues_m, cfg_used.snr_tau_s, hop_s);

  Prediction pred;
  pred.bands = fb.center_freqs_hz.size();
  pred.frames = grid.count;
  pred.band_freqs_hz = fb.center_freqs_hz;
  pred.frame_hop_s = hop_s;
  pred.config = cfg_used;
  pred.bmld_db.assign(pred.bands * pred.frames, 0.0);
  pred.snr_db = snr.snr_db;
  pred.valid.assign(pred.bands * pred.frames, 0);

  for (std::size_t b = 0; b < pred.bands; ++b) {
    const double fc = fb.center_freqs_hz[b];
    std::vector<double> bmld_db_row(pred.frames, 0.0);

    if (cfg_used.variant == Variant::fast) {
      std::vector<double> ratio(pred.frames, 1.0);
      for (std::size_t f = 0; f < pred.frames; ++f) {
        const auto& tc = cues_t.at(b, f);
        const auto& mc = cues_m.at(b, f);
        ratio[f] = (tc.valid && mc.valid)
                       ? bmld_ratio(tc.phase, mc.phase, mc.coherence, fc,
                                    cfg_used.sigma_epsilon, cfg_used.sigma_delta_s)
                       : 1.0;
      }
      const auto smoothed = exp_filter(ratio, cfg_used.bmld_tau_s, hop_s);
      for (std::size_t f = 0; f < pred.frames; ++f) {
        bmld_db_row[f] = 10.0 * std::log10(std::max(1.0, smoothed[f]));
      }
    } else {
      bmld_db_row = slow_bmld_db_for_band(t, m, fc, cfg_used, grid, n);
    }

    for (std::size_t f = 0; f < pred.frames; ++f) {
      const std::size_t idx = b * pred.frames + f;
      pred.bmld_db[idx] = bmld_db_row[f];
      pred.valid[idx] = snr.ok(b, f) ? 1 : 0;
    }
  }

  pred.best_per_frame_db.assign(pred.frames, std::numeric_limits<double>::quiet_NaN());
  double best = -std::numeric_limits<double>::infinity();
  bool any_valid = false;
  for (std::size_t f = 0; f < pred.frames; ++f) {
    double frame_best = -std::numeric_limits<double>::infinity();
    bool frame_valid = false;
    for (std::size_t b = 0; b < pred.bands; ++b) {
      if (!pred.ok(b, f)) continue;
      frame_valid = true;
      frame_best = std::max(frame_best, pred.bmld_at(b, f) + pred.snr_at(b, f));
    }
    if (frame_valid) {
      pred.best_per_frame_db[f] = frame_best;
      best = std::max(best, frame_best);
      any_valid = true;
    }
  }
  if (!any_valid) throw NumericError("predict: no frame with audible masker");
  pred.benefit_db = best;
  return pred;
}

EvalResult evaluate(const std::vector<double>& predicted_benefit_db,
                    const std::vector<double>& measured_threshold_db) {
  const std::size_t n = predicted_benefit_db.size();
  if (n != measured_threshold_db.size() || n < 2) {
    throw ConfigError("evaluate: need two equally sized series");
  }
  // offset minimizing sum((-benefit + offset - measured)^2)
  double mean_diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_diff += (measured_threshold_db[i] + predicted_benefit_db[i]) / static_cast<double>(n);
  }
  EvalResult res;
  res.offset_db = mean_diff;

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = -predicted_benefit_db[i] + res.offset_db;
    const double d = pred - measured_threshold_db[i];
    sse += d * d;
  }
  res.rmse_db = std::sqrt(sse / static_cast<double>(n));

  double mp = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mp += -predicted_benefit_db[i] / static_cast<double>(n);
    mm += measured_threshold_db[i] / static_cast<double>(n);
  }
  double spp = 0.0, smm = 0.0, spm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = -predicted_benefit_db[i] - mp;
    const double dm = measured_threshold_db[i] - mm;
    spp += dp * dp;
    smm += dm * dm;
    spm += dp * dm;
  }
  if (spp > 0.0 && smm > 0.0) res.pearson = spm / std::sqrt(spp * smm);
  return res;
}

}  // namespace bmld
