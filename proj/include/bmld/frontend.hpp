#pragma once

#include <complex>
#include <string>
#include <vector>

#include "bmld/signal.hpp"

namespace bmld {

double hz_to_bark(double freq_hz);
double bark_to_hz(double bark);

/// 4th-order complex (analytic) gammatone filter; magnitude peaks at
/// center_hz, equivalent rectangular bandwidth matched to bandwidth_hz.
std::vector<std::complex<double>> gammatone_analytic(const std::vector<double>& x,
                                                     double center_hz,
                                                     double bandwidth_hz, double fs);

struct FilterbankSpec {
  std::vector<double> center_freqs_hz;  // strictly increasing, < fs/2

  /// Center frequencies at integer Bark positions 2..22, capped below fs/2;
  /// bandwidths come from critical_bandwidth().
  static FilterbankSpec bark_grid(double fs, int bark_lo = 2, int bark_hi = 22);
};

/// Hanning analysis frames: 24 ms windows, 50% overlap by default.
struct FrameGrid {
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  std::size_t count = 0;
  double fs = 44100.0;

  static FrameGrid over(std::size_t samples, double fs, double window_s = 24e-3);
  double frame_center_s(std::size_t frame) const {
    return (static_cast<double>(frame) * static_cast<double>(hop) +
            static_cast<double>(frame_len) / 2.0) / fs;
  }
};

/// Frame power below this (re the unit-RMS calibration, i.e. -100 dB) makes
/// interaural cues undefined.
inline constexpr double kSilenceFloorPower = 1e-10;

struct InterauralCue {
  double coherence = 0.0;  // |normalized zero-lag cross-correlation|
  double phase = 0.0;      // argument, (-pi, pi]
  double power_left = 0.0, power_right = 0.0;  // Hann-weighted mean power
  bool valid = false;
};

/// Zero-lag complex correlation of two analytic subband frames under a Hann
/// window. Flagged invalid when either ear is below the silence floor.
InterauralCue interaural_cue(const std::complex<double>* left,
                             const std::complex<double>* right, std::size_t len,
                             const std::vector<double>& window);

/// Per band and frame cue matrices for one binaural signal.
struct CueMatrix {
  std::size_t bands = 0, frames = 0;
  std::vector<InterauralCue> cues;  // band-major

  InterauralCue& at(std::size_t band, std::size_t frame) {
    return cues[band * frames + frame];
  }
  const InterauralCue& at(std::size_t band, std::size_t frame) const {
    return cues[band * frames + frame];
  }
};

CueMatrix extract_cues(const BinauralSignal& s, const FilterbankSpec& fb,
                       const FrameGrid& grid);

/// Causal leaky integrator y[n] = b y[n-1] + (1-b) x[n], b = exp(-hop/tau);
/// unit DC gain.
std::vector<double> exp_filter(const std::vector<double>& series, double tau_s,
                               double hop_s);

/// CSV dump (band, frame, phi_t, phi_m, rho_m, powers) for debugging and the
/// interaural-correlation analyses.
void dump_cues_csv(const std::string& path, const CueMatrix& target,
                   const CueMatrix& masker, const FilterbankSpec& fb,
                   const FrameGrid& grid);

}  // namespace bmld
