#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmld/frontend.hpp"

namespace bmld {

enum class Variant { fast, slow };

inline const char* variant_name(Variant v) { return v == Variant::fast ? "fast" : "slow"; }

struct ModelConfig {
  Variant variant = Variant::fast;
  double sigma_epsilon = 0.25;
  double sigma_delta_s = 0.105e-3;
  double fast_window_s = 24e-3;       // cue frames, 50% overlap
  double slow_window_s = 300e-3;      // slow-variant BMLD frames, 50% overlap
  double bmld_tau_s = 300e-3;         // sluggishness filter (fast variant only)
  double snr_tau_s = 200e-3;          // better-ear SNR integration
  FilterbankSpec filterbank;          // empty: Bark grid 2..22 for the input fs
};

/// k(f) = (1 + sigma_eps^2) exp((2 pi f)^2 sigma_delta^2); > 1, increasing.
double k_factor(double freq_hz, double sigma_epsilon = 0.25,
                double sigma_delta_s = 0.105e-3);

/// EC unmasking gain (k - cos(phi_t - phi_m)) / (k - rho_m), clamped below at
/// one. The clamp makes the dB contribution non-negative; conversion to dB
/// happens after temporal integration.
double bmld_ratio(double phi_target, double phi_masker, double rho_masker,
                  double freq_hz, double sigma_epsilon = 0.25,
                  double sigma_delta_s = 0.105e-3);

struct SnrSeries {
  std::size_t bands = 0, frames = 0;
  std::vector<double> snr_db;   // band-major, after integration
  std::vector<char> valid;      // masker above the silence floor

  double at(std::size_t b, std::size_t f) const { return snr_db[b * frames + f]; }
  bool ok(std::size_t b, std::size_t f) const { return valid[b * frames + f] != 0; }
};

/// Better-ear SNR: per band and frame the larger of the two monaural
/// target/masker power ratios, integrated as a linear ratio with snr_tau_s,
/// then expressed in dB. Frames with silent masker are flagged.
SnrSeries better_ear_snr_series(const CueMatrix& target, const CueMatrix& masker,
                                double snr_tau_s, double hop_s);

struct Prediction {
  double benefit_db = 0.0;
  std::vector<double> best_per_frame_db;   // max over bands, silent-masker frames NaN
  std::size_t bands = 0, frames = 0;
  std::vector<double> bmld_db;             // band-major matrices
  std::vector<double> snr_db;
  std::vector<char> valid;
  std::vector<double> band_freqs_hz;
  double frame_hop_s = 0.0;
  ModelConfig config;

  double bmld_at(std::size_t b, std::size_t f) const { return bmld_db[b * frames + f]; }
  double snr_at(std::size_t b, std::size_t f) const { return snr_db[b * frames + f]; }
  bool ok(std::size_t b, std::size_t f) const { return valid[b * frames + f] != 0; }
};

/// Runs one model variant on separate clean target and masker signals (the
/// model has pre-mix access). Both must share fs and t=0.
Prediction predict(const BinauralSignal& target, const BinauralSignal& masker,
                   const ModelConfig& cfg);

struct EvalResult {
  double offset_db = 0.0;  // least-squares shift of (-benefit) onto the data
  double rmse_db = 0.0;
  std::optional<double> pearson;  // nullopt when either side has zero variance
};

/// Compares predicted benefits (as thresholds -benefit + offset) against
/// measured thresholds.
EvalResult evaluate(const std::vector<double>& predicted_benefit_db,
                    const std::vector<double>& measured_threshold_db);

}  // namespace bmld
