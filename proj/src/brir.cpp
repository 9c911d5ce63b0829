#include "bmld/brir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"

namespace bmld {

namespace {

/// Adds one image through the head-shadow one-pole filter: the windowed-sinc
/// stencil is passed through the recursion and accumulated until it decays.
void add_filtered_impulse(std::vector<double>& buf, double t_samples, double amplitude,
                          const ShadowFilter& f, int taps = 31) {
  const int half = taps / 2;
  const double floor_t = std::floor(t_samples);
  const double frac = t_samples - floor_t;
  const int base = static_cast<int>(floor_t) - half;
  const auto h = fractional_delay_taps(frac, taps);

  const int max_ring = 512;
  const int total = taps + max_ring;
  if (base + total > static_cast<int>(buf.size())) {
    buf.resize(static_cast<std::size_t>(base + total), 0.0);
  }
  double y_prev = 0.0, x_prev = 0.0;
  const double floor_amp = std::abs(amplitude) * 1e-9;
  for (int i = 0; i < total; ++i) {
    const double x = i < taps ? amplitude * h[static_cast<std::size_t>(i)] : 0.0;
    const double y = f.b0 * x + f.b1 * x_prev - f.a1 * y_prev;
    x_prev = x;
    y_prev = y;
    const int idx = base + i;
    if (idx >= 0) buf[static_cast<std::size_t>(idx)] += y;
    if (i >= taps && std::abs(y) < floor_amp) break;
  }
}

struct EnergySplit {
  double direct = 0.0;
  double early = 0.0;
  double late_power = 0.0;  // mean squared amplitude just before the onset
};

EnergySplit split_energy(const Rir& rir, double onset_s) {
  EnergySplit e;
  const long w0 = static_cast<long>(std::floor((onset_s - 15e-3) * rir.fs));
  const long w1 = static_cast<long>(std::floor(onset_s * rir.fs));
  double late_acc = 0.0;
  long late_n = 0;
  for (std::size_t ch = 0; ch < rir.channels.size(); ++ch) {
    const double td = rir.t_direct_s[ch];
    const long p0 = static_cast<long>(std::floor((td - kDirectProtectPreS) * rir.fs));
    const long p1 = static_cast<long>(std::ceil((td + kDirectProtectPostS) * rir.fs));
    const auto& buf = rir.channels[ch];
    for (long s = 0; s < static_cast<long>(buf.size()); ++s) {
      const double v = buf[static_cast<std::size_t>(s)];
      if (s >= p0 && s <= p1) e.direct += v * v;
      else e.early += v * v;
      if (s >= w0 && s < w1) {
        late_acc += v * v;
        ++late_n;
      }
    }
  }
  if (late_n > 0) e.late_power = late_acc / static_cast<double>(late_n);
  return e;
}

/// Interaural cross-spectrum phase of the last 15 ms of the exact part,
/// complex-averaged over +-75 Hz, sampled every df Hz up to Nyquist.
std::vector<double> late_cross_phase(const Rir& early, double onset_s, double df) {
  if (early.num_channels() != 2) return {};
  const long w1 = static_cast<long>(std::floor(onset_s * early.fs));
  const long w0 = std::max<long>(0, w1 - static_cast<long>(std::llround(15e-3 * early.fs)));
  const std::size_t seg = static_cast<std::size_t>(std::max<long>(0, w1 - w0));
  if (seg < 32) return {};

  const std::size_t nfft = std::max<std::size_t>(4096, next_pow2(seg));
  std::vector<std::complex<double>> lf(nfft), rf(nfft);
  double energy = 0.0;
  for (std::size_t i = 0; i < seg; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                           static_cast<double>(seg)));
    const std::size_t s = static_cast<std::size_t>(w0) + i;
    if (s >= early.channels[0].size()) break;
    lf[i] = w * early.channels[0][s];
    rf[i] = w * early.channels[1][s];
    energy += std::norm(lf[i]) + std::norm(rf[i]);
  }
  if (energy <= 0.0) return {};
  fft(lf, false);
  fft(rf, false);

  const double bin_hz = early.fs / static_cast<double>(nfft);
  const std::size_t half = nfft / 2;
  std::vector<std::complex<double>> cross(half + 1);
  for (std::size_t k = 0; k <= half; ++k) cross[k] = lf[k] * std::conj(rf[k]);

  const std::size_t n_out = static_cast<std::size_t>(early.fs / 2.0 / df) + 1;
  std::vector<double> phase(n_out, 0.0);
  const long span = std::max<long>(1, static_cast<long>(std::llround(75.0 / bin_hz)));
  for (std::size_t j = 0; j < n_out; ++j) {
    const long kc = static_cast<long>(std::llround(j * df / bin_hz));
    std::complex<double> acc = 0.0;
    for (long k = kc - span; k <= kc + span; ++k) {
      if (k < 0 || k > static_cast<long>(half)) continue;
      acc += cross[static_cast<std::size_t>(k)];
    }
    phase[j] = std::abs(acc) > 0.0 ? std::arg(acc) : 0.0;
  }
  return phase;
}

}  // namespace

Rir render_images_binaural(const ImageSourceSet& images, const HeadModel& head, double fs) {
  if (images.sources.empty()) {
    throw ConfigError("render_images_binaural: empty image-source set");
  }

  Rir rir;
  rir.fs = fs;
  rir.channels.assign(2, {});
  rir.t_direct_s.assign(2, std::numeric_limits<double>::infinity());

  const double c = images.speed_of_sound;
  for (const auto& img : images.sources) {
    const Vec3 delta = img.position - head.position;
    const double r = delta.norm();
    const Vec3 dir = delta / r;
    const double amp = img.amplitude_factor / r;
    for (int e = 0; e < 2; ++e) {
      const Ear ear = e == 0 ? Ear::left : Ear::right;
      const double cosg = std::clamp(dir.dot(head.ear_axis(ear)), -1.0, 1.0);
      const double gamma = std::acos(cosg);
      const double t = r / c + ear_delay_from_incidence(head, gamma);
      add_filtered_impulse(rir.channels[static_cast<std::size_t>(e)], t * fs, amp,
                           head_shadow_filter(head, gamma, fs));
      if (img.order == 0) {
        rir.t_direct_s[static_cast<std::size_t>(e)] =
            std::min(rir.t_direct_s[static_cast<std::size_t>(e)], t);
      }
    }
  }
  if (!std::isfinite(rir.t_direct_s[0]) || !std::isfinite(rir.t_direct_s[1])) {
    rir.has_direct = false;
    rir.t_direct_s.clear();
  }
  const std::size_t n = std::max(rir.channels[0].size(), rir.channels[1].size());
  rir.channels[0].resize(n, 0.0);
  rir.channels[1].resize(n, 0.0);
  return rir;
}

Rir render_brir(const ImageSourceSet& images, const Tail& tail, const HeadModel& head,
                double fs) {
  if (tail.fs != fs) throw ConfigError("render_brir: tail sample rate mismatch");
  Rir rir = render_images_binaural(images, head, fs);
  const std::size_t n = std::max(rir.length(), tail.left.size());
  rir.channels[0].resize(n, 0.0);
  rir.channels[1].resize(n, 0.0);
  for (std::size_t i = 0; i < tail.left.size(); ++i) {
    rir.channels[0][i] += tail.left[i];
    rir.channels[1][i] += tail.right[i];
  }
  rir.tail_seed = tail.seed;
  return rir;
}

Rir assemble_brir(const ImageSourceSet& images, TailSpec spec, const HeadModel& head,
                  double fs) {
  Rir early = render_images_binaural(images, head, fs);
  if (!early.has_direct) {
    throw NumericError("assemble_brir: no direct sound in image-source set");
  }
  const EnergySplit e = split_energy(early, spec.onset_s);
  spec.direct_energy = e.direct;
  spec.early_energy = e.early;
  spec.late_power_floor = e.late_power;
  spec.output_channels = 2;
  spec.t_direct_s = std::min(early.t_direct_s[0], early.t_direct_s[1]);
  if (spec.cross_phase_rad.empty()) {
    spec.cross_phase_rad = late_cross_phase(early, spec.onset_s, spec.cross_phase_df);
  }
  const Tail tail = synthesize_diffuse_tail(spec, fs);
  const std::size_t n = std::max(early.length(), tail.left.size());
  early.channels[0].resize(n, 0.0);
  early.channels[1].resize(n, 0.0);
  for (std::size_t i = 0; i < tail.left.size(); ++i) {
    early.channels[0][i] += tail.left[i];
    early.channels[1][i] += tail.right[i];
  }
  early.tail_seed = spec.seed;
  return early;
}

Rir assemble_rir_omni(const ImageSourceSet& images, TailSpec spec, double fs) {
  Rir early = synthesize_rir(images, fs, images.speed_of_sound);
  if (!early.has_direct) {
    throw NumericError("assemble_rir_omni: no direct sound in image-source set");
  }
  const EnergySplit e = split_energy(early, spec.onset_s);
  spec.direct_energy = e.direct;
  spec.early_energy = e.early;
  spec.late_power_floor = e.late_power;
  spec.output_channels = 1;
  spec.t_direct_s = early.t_direct_s[0];
  const Tail tail = synthesize_diffuse_tail(spec, fs);
  const std::size_t n = std::max(early.length(), tail.left.size());
  early.channels[0].resize(n, 0.0);
  // Omni responses take one tail channel; interaural shaping is meaningless
  // for a single receiver.
  for (std::size_t i = 0; i < tail.left.size(); ++i) early.channels[0][i] += tail.left[i];
  early.tail_seed = spec.seed;
  return early;
}

Rir render_point_source(double azimuth_deg, double distance_m, const HeadModel& head,
                        double fs) {
  if (distance_m <= head.radius_m) {
    throw ConfigError("render_point_source: source inside the head sphere");
  }
  const double az = azimuth_deg * kPi / 180.0;
  const Vec3 f = head.facing;
  const Vec3 dir{f.x * std::cos(az) - f.y * std::sin(az),
                 f.x * std::sin(az) + f.y * std::cos(az), f.z};
  ImageSourceSet set;
  set.source = head.position + dir * distance_m;
  set.receiver = head.position;
  set.speed_of_sound = head.speed_of_sound;
  ImageSource direct;
  direct.position = set.source;
  direct.order = 0;
  direct.amplitude_factor = 1.0;
  direct.arrival_time_s = distance_m / head.speed_of_sound;
  set.sources.push_back(direct);
  return render_images_binaural(set, head, fs);
}

}  // namespace bmld
