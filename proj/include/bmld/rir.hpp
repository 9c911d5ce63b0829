#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmld/image_source.hpp"

namespace bmld {

/// Direct-sound protection window around the direct arrival. Both
/// manipulation modes leave [t_d - 0.5 ms, t_d + 1.5 ms] untouched.
inline constexpr double kDirectProtectPreS = 0.5e-3;
inline constexpr double kDirectProtectPostS = 1.5e-3;

struct Manipulation {
  enum class Mode { none, truncate, cut };
  Mode mode = Mode::none;
  double t_ms = 0.0;

  std::string mode_name() const {
    switch (mode) {
      case Mode::truncate: return "truncate";
      case Mode::cut: return "cut";
      default: return "none";
    }
  }
};

/// Sampled impulse response on the emission timeline (t = 0 when the source
/// emits, so a 5 m direct path peaks at 14.58 ms). One channel when omni, two
/// when rendered binaurally.
struct Rir {
  std::vector<std::vector<double>> channels;
  double fs = 44100.0;
  std::vector<double> t_direct_s;  // per channel; empty when no direct sound
  Manipulation manipulation;
  std::uint64_t tail_seed = 0;
  bool has_direct = true;

  std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
  int num_channels() const { return static_cast<int>(channels.size()); }
};

/// Samples an image-source set into an omnidirectional single-channel RIR.
/// Each image contributes a 31-tap windowed-sinc impulse at its arrival time
/// with amplitude reflection_factor / distance.
Rir synthesize_rir(const ImageSourceSet& images, double fs, double speed_of_sound = 343.0);

/// truncate: zero everything after t_ms. cut: zero between the end of the
/// direct-protect window and t_ms. The protect window is never zeroed.
/// Throws ConfigError when truncation would remove the direct sound
/// (t_ms before the start of the protect window).
Rir manipulate_rir(const Rir& rir, Manipulation::Mode mode, double t_ms);

struct RirAnalysis {
  std::optional<double> rt60_s;  // nullopt: decay range shorter than 35 dB
  double drr_db = 0.0;           // +inf sentinel when there is no late energy
};

/// Schroeder backward integration; RT60 from the -5..-35 dB fit of the energy
/// decay curve, DRR with the direct-protect window as the direct part.
RirAnalysis analyze_rir(const Rir& rir);

}  // namespace bmld
