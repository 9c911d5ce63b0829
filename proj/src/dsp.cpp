#include "bmld/dsp.hpp"

#include <algorithm>
#include <cmath>

namespace bmld {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n < 2) return;
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : data) x /= static_cast<double>(n);
  }
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  std::vector<std::complex<double>> fa(n), fb(n);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft(fa, false);
  fft(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft(fa, true);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

std::vector<double> hann_periodic(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(n) /
                                 static_cast<double>(length)));
  }
  return w;
}

std::vector<double> fractional_delay_taps(double frac, int taps) {
  const int half = taps / 2;
  std::vector<double> h(taps);
  for (int i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i - half) - frac;
    const double sinc = t == 0.0 ? 1.0 : std::sin(kPi * t) / (kPi * t);
    // Hann window across the tap span
    const double u = (static_cast<double>(i) - frac) / static_cast<double>(taps - 1);
    const double w = (u <= 0.0 || u >= 1.0) ? 0.0 : 0.5 * (1.0 - std::cos(2.0 * kPi * u));
    h[i] = sinc * w;
  }
  return h;
}

void add_impulse(std::vector<double>& buf, double t_samples, double amplitude, int taps) {
  const int half = taps / 2;
  const double floor_t = std::floor(t_samples);
  const double frac = t_samples - floor_t;
  const int base = static_cast<int>(floor_t) - half;
  const auto h = fractional_delay_taps(frac, taps);
  const int need = base + taps;
  if (need > static_cast<int>(buf.size())) buf.resize(static_cast<std::size_t>(need), 0.0);
  for (int i = 0; i < taps; ++i) {
    const int idx = base + i;
    if (idx >= 0) buf[static_cast<std::size_t>(idx)] += amplitude * h[static_cast<std::size_t>(i)];
  }
}

}  // namespace bmld
