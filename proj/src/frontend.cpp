#include "bmld/frontend.hpp"

#include <cmath>
#include <fstream>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"
#include "bmld/stimuli.hpp"

namespace bmld {

double hz_to_bark(double freq_hz) {
  return 13.0 * std::atan(0.00076 * freq_hz) +
         3.5 * std::atan((freq_hz / 7500.0) * (freq_hz / 7500.0));
}

double bark_to_hz(double bark) {
  double lo = 10.0, hi = 20000.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hz_to_bark(mid) < bark) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::complex<double>> gammatone_analytic(const std::vector<double>& x,
                                                     double center_hz,
                                                     double bandwidth_hz, double fs) {
  if (center_hz >= fs / 2.0) throw ConfigError("gammatone_analytic: center above Nyquist");
  // ERB of a 4th-order gammatone is (5 pi / 16) b, with b the one-pole
  // bandwidth parameter.
  const double b = bandwidth_hz * 16.0 / (5.0 * kPi);
  const double r = std::exp(-2.0 * kPi * b / fs);
  const std::complex<double> pole = r * std::exp(std::complex<double>(0.0, 2.0 * kPi * center_hz / fs));
  const double gain = 1.0 - r;  // per stage: unit gain at the center frequency

  std::vector<std::complex<double>> y(x.begin(), x.end());
  for (int stage = 0; stage < 4; ++stage) {
    std::complex<double> state = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      state = pole * state + gain * y[i];
      y[i] = state;
    }
  }
  // Analytic subband: double the one-sided amplitude so the real part
  // reproduces the band content.
  for (auto& v : y) v *= 2.0;
  return y;
}

FilterbankSpec FilterbankSpec::bark_grid(double fs, int bark_lo, int bark_hi) {
  FilterbankSpec spec;
  for (int z = bark_lo; z <= bark_hi; ++z) {
    const double f = bark_to_hz(static_cast<double>(z));
    if (f >= 0.45 * fs) break;
    spec.center_freqs_hz.push_back(f);
  }
  return spec;
}

FrameGrid FrameGrid::over(std::size_t samples, double fs, double window_s) {
  FrameGrid g;
  g.fs = fs;
  std::size_t len = static_cast<std::size_t>(std::llround(window_s * fs));
  if (len % 2 != 0) ++len;  // even length keeps 50% overlap COLA exact
  g.frame_len = len;
  g.hop = len / 2;
  g.count = samples >= len ? (samples - len) / g.hop + 1 : (samples > 0 ? 1 : 0);
  return g;
}

InterauralCue interaural_cue(const std::complex<double>* left,
                             const std::complex<double>* right, std::size_t len,
                             const std::vector<double>& window) {
  InterauralCue cue;
  std::complex<double> cross = 0.0;
  double pl = 0.0, pr = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double w = window[i];
    cross += w * left[i] * std::conj(right[i]);
    pl += w * std::norm(left[i]);
    pr += w * std::norm(right[i]);
    wsum += w;
  }
  if (wsum <= 0.0) return cue;
  cue.power_left = pl / wsum;
  cue.power_right = pr / wsum;
  if (cue.power_left < kSilenceFloorPower || cue.power_right < kSilenceFloorPower) {
    return cue;  // flagged invalid
  }
  cue.coherence = std::abs(cross) / std::sqrt(pl * pr);
  cue.phase = std::arg(cross);
  cue.valid = true;
  return cue;
}

CueMatrix extract_cues(const BinauralSignal& s, const FilterbankSpec& fb,
                       const FrameGrid& grid) {
  CueMatrix m;
  m.bands = fb.center_freqs_hz.size();
  m.frames = grid.count;
  m.cues.resize(m.bands * m.frames);
  const auto window = hann_periodic(grid.frame_len);

  for (std::size_t b = 0; b < m.bands; ++b) {
    const double fc = fb.center_freqs_hz[b];
    const auto l = gammatone_analytic(s.left, fc, critical_bandwidth(fc), s.fs);
    const auto r = gammatone_analytic(s.right, fc, critical_bandwidth(fc), s.fs);
    for (std::size_t f = 0; f < m.frames; ++f) {
      const std::size_t start = f * grid.hop;
      if (start + grid.frame_len <= l.size()) {
        m.at(b, f) = interaural_cue(&l[start], &r[start], grid.frame_len, window);
      } else {
        // trailing frame beyond this signal: zero-pad
        std::vector<std::complex<double>> lt(grid.frame_len, {0, 0}), rt(grid.frame_len, {0, 0});
        for (std::size_t i = 0; start + i < l.size(); ++i) {
          lt[i] = l[start + i];
          rt[i] = r[start + i];
        }
        m.at(b, f) = interaural_cue(lt.data(), rt.data(), grid.frame_len, window);
      }
    }
  }
  return m;
}

std::vector<double> exp_filter(const std::vector<double>& series, double tau_s,
                               double hop_s) {
  if (tau_s <= 0.0) throw ConfigError("exp_filter: tau must be > 0");
  const double beta = std::exp(-hop_s / tau_s);
  std::vector<double> out(series.size());
  double y = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    y = beta * y + (1.0 - beta) * series[i];
    out[i] = y;
  }
  return out;
}

void dump_cues_csv(const std::string& path, const CueMatrix& target,
                   const CueMatrix& masker, const FilterbankSpec& fb,
                   const FrameGrid& grid) {
  std::ofstream f(path);
  if (!f) throw ConfigError("dump_cues_csv: cannot open " + path);
  f << "band_hz,frame,time_s,phi_t,phi_m,rho_m,p_t_left,p_t_right,p_m_left,p_m_right,"
       "valid_t,valid_m\n";
  for (std::size_t b = 0; b < target.bands; ++b) {
    for (std::size_t fr = 0; fr < target.frames; ++fr) {
      const auto& t = target.at(b, fr);
      const auto& mk = masker.at(b, fr);
      f << fb.center_freqs_hz[b] << ',' << fr << ',' << grid.frame_center_s(fr) << ','
        << t.phase << ',' << mk.phase << ',' << mk.coherence << ',' << t.power_left << ','
        << t.power_right << ',' << mk.power_left << ',' << mk.power_right << ','
        << (t.valid ? 1 : 0) << ',' << (mk.valid ? 1 : 0) << '\n';
    }
  }
}

}  // namespace bmld
