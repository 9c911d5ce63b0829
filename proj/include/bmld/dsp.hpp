#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bmld {

inline constexpr double kPi = 3.14159265358979323846;

/// In-place radix-2 FFT. Size must be a power of two. inverse=true includes
/// the 1/N normalization.
void fft(std::vector<std::complex<double>>& data, bool inverse);

std::size_t next_pow2(std::size_t n);

/// Full linear convolution, length a + b - 1, computed via FFT.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

/// Periodic Hann window; 50% overlapped copies sum to one.
std::vector<double> hann_periodic(std::size_t length);

/// Hann-windowed sinc interpolation taps for an impulse at fractional sample
/// position `frac` in [0, 1), `taps` wide (odd).
std::vector<double> fractional_delay_taps(double frac, int taps = 31);

/// Adds `amplitude` at fractional sample time `t_samples` into `buf`,
/// extending it if needed.
void add_impulse(std::vector<double>& buf, double t_samples, double amplitude,
                 int taps = 31);

}  // namespace bmld
