#pragma once

#include <cstdint>

#include "bmld/signal.hpp"

namespace bmld {

/// Zwicker critical bandwidth in Hz: 25 + 75 (1 + 1.4 (f/kHz)^2)^0.69.
double critical_bandwidth(double freq_hz);

/// Harmonic complex tone target: harmonics 7..13 of 50 Hz, each auditory
/// filter on the Bark scale receiving identical energy, 500 ms at or above
/// 90% of the envelope maximum, 10 ms Gaussian ramps.
struct HctSpec {
  double f0_hz = 50.0;
  int first_harmonic = 7;
  int last_harmonic = 13;
  double effective_duration_s = 0.5;  // time with envelope >= 90% of max
  double ramp_s = 10e-3;
  double level_db_spl = 60.0;
  bool random_phase = false;
  std::uint64_t phase_seed = 0;
};

/// Uniform exciting noise masker: equal power per critical band inside
/// 250..750 Hz, 900 ms, 30 ms Gaussian ramps, 60 dB SPL.
struct NoiseSpec {
  double band_low_hz = 250.0;
  double band_high_hz = 750.0;
  double duration_s = 0.9;
  double ramp_s = 30e-3;
  double level_db_spl = 60.0;
  std::uint64_t seed = 0;
};

Signal synth_hct(const HctSpec& spec, double fs);
Signal synth_uen(const NoiseSpec& spec, double fs);

/// Flat-spectrum band-limited noise (replication stimuli), Gaussian ramps.
Signal synth_bandpass_noise(double low_hz, double high_hz, double duration_s,
                            double ramp_s, double level_db_spl, std::uint64_t seed,
                            double fs);

}  // namespace bmld
