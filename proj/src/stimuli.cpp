#include "bmld/stimuli.hpp"

#include <cmath>
#include <complex>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"
#include "bmld/rng.hpp"

namespace bmld {

double critical_bandwidth(double freq_hz) {
  if (freq_hz <= 0.0) throw ConfigError("critical_bandwidth: frequency must be > 0");
  const double f_khz = freq_hz / 1000.0;
  return 25.0 + 75.0 * std::pow(1.0 + 1.4 * f_khz * f_khz, 0.69);
}

namespace {

/// Gaussian-flank envelope: exp(-t^2 / 2 sigma^2) flanks with sigma =
/// ramp / 2.5, clipped at 3 sigma, around a flat plateau.
std::vector<double> gaussian_envelope(double plateau_s, double ramp_s, double fs) {
  const double sigma = ramp_s / 2.5;
  const double flank = 3.0 * sigma;
  const std::size_t n = static_cast<std::size_t>(std::llround((plateau_s + 2.0 * flank) * fs));
  std::vector<double> env(n);
  const double t0 = flank;               // plateau start
  const double t1 = flank + plateau_s;   // plateau end
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double v = 1.0;
    if (t < t0) {
      const double d = (t0 - t) / sigma;
      v = std::exp(-0.5 * d * d);
    } else if (t > t1) {
      const double d = (t - t1) / sigma;
      v = std::exp(-0.5 * d * d);
    }
    env[i] = v;
  }
  return env;
}

}  // namespace

Signal synth_hct(const HctSpec& spec, double fs) {
  if (fs < 4000.0) throw ConfigError("synth_hct: fs must be >= 4 kHz");

  // The envelope stays above 90% slightly beyond the plateau on both sides;
  // shrink the plateau so the time above 90% equals the effective duration.
  const double sigma = spec.ramp_s / 2.5;
  const double d90 = sigma * std::sqrt(2.0 * std::log(1.0 / 0.9));
  const double plateau = spec.effective_duration_s - 2.0 * d90;
  if (plateau <= 0.0) throw ConfigError("synth_hct: duration shorter than ramps");

  const auto env = gaussian_envelope(plateau, spec.ramp_s, fs);

  Signal out;
  out.fs = fs;
  out.samples.assign(env.size(), 0.0);
  Rng rng(spec.phase_seed);
  for (int h = spec.first_harmonic; h <= spec.last_harmonic; ++h) {
    const double f = h * spec.f0_hz;
    if (f >= fs / 2.0) throw ConfigError("synth_hct: harmonic above Nyquist");
    const double amp = std::sqrt(spec.f0_hz / critical_bandwidth(f));
    const double phase = spec.random_phase ? 2.0 * kPi * rng.uniform() : 0.0;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const double t = static_cast<double>(i) / fs;
      out.samples[i] += amp * std::cos(2.0 * kPi * f * t + phase);
    }
  }
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] *= env[i];
  set_level_db_spl(out, spec.level_db_spl);
  return out;
}

namespace {

Signal spectral_noise(double low_hz, double high_hz, double duration_s, double ramp_s,
                      double level_db_spl, std::uint64_t seed, double fs,
                      bool per_critical_band) {
  if (high_hz <= low_hz) throw ConfigError("noise: band_high must exceed band_low");
  if (high_hz >= fs / 2.0) throw ConfigError("noise: band edge above Nyquist");

  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * fs));
  const std::size_t nfft = next_pow2(2 * n);
  std::vector<std::complex<double>> spec(nfft, {0.0, 0.0});
  Rng rng(seed);
  const std::size_t half = nfft / 2;
  for (std::size_t k = 1; k < half; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(nfft);
    if (f < low_hz || f > high_hz) continue;
    const double mag = per_critical_band ? std::sqrt(1.0 / critical_bandwidth(f)) : 1.0;
    const double phase = 2.0 * kPi * rng.uniform();
    spec[k] = std::polar(mag, phase);
    spec[nfft - k] = std::conj(spec[k]);
  }
  fft(spec, true);

  const double sigma = ramp_s / 2.5;
  const double plateau = duration_s - 6.0 * sigma;
  if (plateau <= 0.0) throw ConfigError("noise: duration shorter than ramps");
  const auto env = gaussian_envelope(plateau, ramp_s, fs);

  Signal out;
  out.fs = fs;
  out.samples.resize(env.size());
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = spec[i].real() * env[i];
  }
  set_level_db_spl(out, level_db_spl);
  return out;
}

}  // namespace

Signal synth_uen(const NoiseSpec& spec, double fs) {
  return spectral_noise(spec.band_low_hz, spec.band_high_hz, spec.duration_s, spec.ramp_s,
                        spec.level_db_spl, spec.seed, fs, true);
}

Signal synth_bandpass_noise(double low_hz, double high_hz, double duration_s,
                            double ramp_s, double level_db_spl, std::uint64_t seed,
                            double fs) {
  return spectral_noise(low_hz, high_hz, duration_s, ramp_s, level_db_spl, seed, fs, false);
}

}  // namespace bmld
