#pragma once

#include <cstdint>
#include <vector>

namespace bmld {

/// Stochastic late-reverberation model. The exact image-source part of a
/// hybrid RIR stops at `onset_s`; from there an exponentially decaying,
/// interaurally coherence-shaped noise pair takes over. Energy targets are
/// expressed through the desired direct-to-reverberant ratio of the final
/// response: tail energy = direct_energy / 10^(drr_db/10) - early_energy.
struct TailSpec {
  double rt60_s = 0.5;
  double drr_db = -10.0;
  double onset_s = 0.075;
  double t_direct_s = 0.0;
  double head_radius_m = 0.0875;
  double speed_of_sound = 343.0;
  std::uint64_t seed = 0;
  double length_s = 0.0;        // 0: onset + 1.3 * rt60
  double fade_s = 5e-3;         // crossfade ramp ahead of the onset
  double direct_energy = 1.0;
  double early_energy = 0.0;    // image-source energy outside the direct window
  // Mean squared sample amplitude (per channel) of the exact part just
  // before the onset. Floors the tail energy so the decay continues
  // seamlessly even when the early part alone exhausts the DRR budget.
  double late_power_floor = 0.0;
  int output_channels = 2;      // energy target counts this many channels
  // Interaural cross-spectrum phase of the late exact field, sampled every
  // cross_phase_df Hz from 0. The tail keeps this anisotropy so the hand-off
  // at the onset does not rotate the interaural correlation vector. Empty:
  // zero phase (isotropic free field).
  std::vector<double> cross_phase_rad;
  double cross_phase_df = 50.0;
};

struct Tail {
  std::vector<double> left, right;  // absolute emission timeline, zeros before fade
  double fs = 44100.0;
  double onset_s = 0.0;
  std::uint64_t seed = 0;
  bool energy_clamped = false;  // early reflections alone exceeded the DRR target
};

/// Diffuse-field interaural coherence of two points one head diameter apart.
double diffuse_coherence(double freq_hz, double head_radius_m, double speed_of_sound);

/// Deterministic given the seed. Interaural coherence per frequency follows
/// sin(x)/x with x = 2*pi*f*(2*head_radius)/c, realized by frequency-dependent
/// mixing of two independent noises before the common decay envelope.
Tail synthesize_diffuse_tail(const TailSpec& spec, double fs);

}  // namespace bmld
