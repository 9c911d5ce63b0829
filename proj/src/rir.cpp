#include "bmld/rir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"

namespace bmld {

Rir synthesize_rir(const ImageSourceSet& images, double fs, double speed_of_sound) {
  if (fs < 16000.0) throw ConfigError("synthesize_rir: fs must be >= 16 kHz");

  Rir rir;
  rir.fs = fs;
  rir.channels.resize(1);

  if (images.sources.empty()) {
    rir.has_direct = false;
    return rir;
  }

  double t_direct = std::numeric_limits<double>::infinity();
  for (const auto& img : images.sources) {
    const double r = (img.position - images.receiver).norm();
    const double t = r / speed_of_sound;
    add_impulse(rir.channels[0], t * fs, img.amplitude_factor / r);
    if (img.order == 0) t_direct = std::min(t_direct, t);
  }
  if (std::isfinite(t_direct)) {
    rir.t_direct_s = {t_direct};
  } else {
    rir.has_direct = false;
  }
  return rir;
}

namespace {

struct ProtectWindow {
  long begin;  // first protected sample
  long end;    // last protected sample (inclusive)
};

ProtectWindow protect_window(double t_direct_s, double fs) {
  return {static_cast<long>(std::floor((t_direct_s - kDirectProtectPreS) * fs)),
          static_cast<long>(std::ceil((t_direct_s + kDirectProtectPostS) * fs))};
}

}  // namespace

Rir manipulate_rir(const Rir& rir, Manipulation::Mode mode, double t_ms) {
  if (t_ms < 0.0) throw ConfigError("manipulate_rir: t_ms must be >= 0");
  if (!rir.has_direct || rir.t_direct_s.size() != rir.channels.size()) {
    throw ConfigError("manipulate_rir: RIR has no direct sound to protect");
  }

  Rir out = rir;
  out.manipulation = {mode, t_ms};
  const double t_manip = t_ms * 1e-3;

  for (std::size_t ch = 0; ch < out.channels.size(); ++ch) {
    const ProtectWindow pw = protect_window(rir.t_direct_s[ch], rir.fs);
    const long t_sample = static_cast<long>(std::llround(t_manip * rir.fs));
    auto& buf = out.channels[ch];
    const long n = static_cast<long>(buf.size());

    if (mode == Manipulation::Mode::truncate) {
      if (t_sample < pw.begin) {
        throw ConfigError("manipulate_rir: truncation would delete the direct sound");
      }
      for (long s = t_sample + 1; s < n; ++s) {
        if (s >= pw.begin && s <= pw.end) continue;
        buf[static_cast<std::size_t>(s)] = 0.0;
      }
    } else if (mode == Manipulation::Mode::cut) {
      for (long s = pw.end + 1; s <= std::min(t_sample, n - 1); ++s) {
        buf[static_cast<std::size_t>(s)] = 0.0;
      }
    }
  }
  return out;
}

RirAnalysis analyze_rir(const Rir& rir) {
  if (!rir.has_direct || rir.t_direct_s.empty()) {
    throw NumericError("analyze_rir: RIR has no identifiable direct sound");
  }

  // Summed squared amplitude over channels.
  const std::size_t n = rir.length();
  std::vector<double> energy(n, 0.0);
  for (const auto& ch : rir.channels) {
    for (std::size_t i = 0; i < ch.size(); ++i) energy[i] += ch[i] * ch[i];
  }

  double e_direct = 0.0, e_total = 0.0;
  for (std::size_t ch = 0; ch < rir.channels.size(); ++ch) {
    const ProtectWindow pw = protect_window(rir.t_direct_s[ch], rir.fs);
    const auto& buf = rir.channels[ch];
    for (long s = 0; s < static_cast<long>(buf.size()); ++s) {
      const double e = buf[static_cast<std::size_t>(s)] * buf[static_cast<std::size_t>(s)];
      e_total += e;
      if (s >= pw.begin && s <= pw.end) e_direct += e;
    }
  }
  const double e_rest = e_total - e_direct;

  RirAnalysis result;
  if (e_rest <= 0.0 || e_direct <= 0.0) {
    result.drr_db = std::numeric_limits<double>::infinity();
  } else {
    result.drr_db = 10.0 * std::log10(e_direct / e_rest);
  }

  // Schroeder backward integration on the full response.
  std::vector<double> edc(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += energy[i];
    edc[i] = acc;
  }
  if (acc <= 0.0) return result;

  // Least-squares line through the -5..-35 dB section of the decay curve.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (edc[i] <= 0.0) break;
    const double db = 10.0 * std::log10(edc[i] / acc);
    if (db > -5.0) continue;
    if (db < -35.0) break;
    const double t = static_cast<double>(i) / rir.fs;
    sx += t;
    sy += db;
    sxx += t * t;
    sxy += t * db;
    ++count;
  }
  if (count >= 16) {
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    if (denom > 0.0) {
      const double slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
      if (slope < 0.0) result.rt60_s = -60.0 / slope;
    }
  }
  return result;
}

}  // namespace bmld
