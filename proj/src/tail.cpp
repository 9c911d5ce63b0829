#include "bmld/tail.hpp"

#include <cmath>
#include <complex>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"
#include "bmld/rng.hpp"

namespace bmld {

double diffuse_coherence(double freq_hz, double head_radius_m, double speed_of_sound) {
  const double x = 2.0 * kPi * freq_hz * (2.0 * head_radius_m) / speed_of_sound;
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(x) / x;
}

Tail synthesize_diffuse_tail(const TailSpec& spec, double fs) {
  if (spec.rt60_s <= 0.0) throw ConfigError("synthesize_diffuse_tail: rt60 must be > 0");
  if (spec.onset_s < spec.t_direct_s) {
    throw ConfigError("synthesize_diffuse_tail: onset before the direct sound");
  }

  const double length_s = spec.length_s > 0.0 ? spec.length_s : spec.onset_s + 1.3 * spec.rt60_s;
  const std::size_t n = static_cast<std::size_t>(std::llround(length_s * fs));
  const std::size_t nfft = next_pow2(n);

  // Stationary noise pair with the sinc coherence profile, built in the
  // frequency domain from two independent seeded spectra.
  std::vector<std::complex<double>> lf(nfft), rf(nfft);
  Rng rng(spec.seed);
  const std::size_t half = nfft / 2;
  auto cross_phase_at = [&spec](double f) {
    if (spec.cross_phase_rad.empty()) return 0.0;
    const double pos = f / spec.cross_phase_df;
    const std::size_t j = static_cast<std::size_t>(pos);
    if (j + 1 >= spec.cross_phase_rad.size()) return spec.cross_phase_rad.back();
    const double w = pos - static_cast<double>(j);
    return (1.0 - w) * spec.cross_phase_rad[j] + w * spec.cross_phase_rad[j + 1];
  };
  for (std::size_t k = 0; k <= half; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(nfft);
    const double g = diffuse_coherence(f, spec.head_radius_m, spec.speed_of_sound);
    const double mix = std::sqrt(std::max(0.0, 1.0 - g * g));
    std::complex<double> n1, n2;
    if (k == 0 || k == half) {
      n1 = {rng.normal(), 0.0};
      n2 = {rng.normal(), 0.0};
    } else {
      n1 = {rng.normal(), rng.normal()};
      n2 = {rng.normal(), rng.normal()};
    }
    // E[L R*] = g e^{i phase}: rotate the coherent part of the right channel.
    const double phase = cross_phase_at(f);
    std::complex<double> rot = std::polar(1.0, -phase);
    if (k == 0 || k == half) rot = phase == 0.0 ? 1.0 : std::complex<double>(std::cos(phase), 0.0);
    lf[k] = n1;
    rf[k] = g * rot * n1 + mix * n2;
    if (k != 0 && k != half) {
      lf[nfft - k] = std::conj(lf[k]);
      rf[nfft - k] = std::conj(rf[k]);
    }
  }
  fft(lf, true);
  fft(rf, true);

  Tail tail;
  tail.fs = fs;
  tail.onset_s = spec.onset_s;
  tail.seed = spec.seed;
  tail.left.assign(n, 0.0);
  tail.right.assign(n, 0.0);

  const double fade_start = spec.onset_s - spec.fade_s;
  const double decay = 6.9078 / spec.rt60_s;  // ln(10^3): -60 dB amplitude points
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    if (t < fade_start) continue;
    double env = std::exp(-decay * std::max(0.0, t - fade_start));
    if (t < spec.onset_s && spec.fade_s > 0.0) {
      const double u = (t - fade_start) / spec.fade_s;
      const double ramp = 0.5 * (1.0 - std::cos(kPi * u));
      env *= ramp;
    }
    tail.left[i] = lf[i].real() * env;
    tail.right[i] = rf[i].real() * env;
  }

  // Scale so the assembled response meets the DRR target; when the early
  // part alone exceeds the budget, fall back to continuing its decay.
  const double drr_lin = std::pow(10.0, spec.drr_db / 10.0);
  const double drr_target = spec.direct_energy / drr_lin - spec.early_energy;
  const double continuation = spec.output_channels * spec.late_power_floor * fs *
                              spec.rt60_s / (2.0 * 6.9078);
  double target = std::max(drr_target, continuation);
  if (target <= 0.0) {
    tail.energy_clamped = true;
    target = 1e-12 * spec.direct_energy;
  } else if (drr_target < continuation) {
    tail.energy_clamped = true;
  }
  double raw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    raw += tail.left[i] * tail.left[i];
    if (spec.output_channels == 2) raw += tail.right[i] * tail.right[i];
  }
  if (raw > 0.0) {
    const double scale = std::sqrt(target / raw);
    for (std::size_t i = 0; i < n; ++i) {
      tail.left[i] *= scale;
      tail.right[i] *= scale;
    }
  }
  return tail;
}

}  // namespace bmld
