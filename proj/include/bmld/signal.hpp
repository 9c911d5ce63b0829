#pragma once

#include <vector>

#include "bmld/rir.hpp"

namespace bmld {

/// Calibration convention: a unit-RMS digital signal corresponds to
/// 100 dB SPL. All model quantities are ratios, so the anchor is arbitrary
/// but global.
inline constexpr double kFullScaleDbSpl = 100.0;

struct Signal {
  std::vector<double> samples;
  double fs = 44100.0;
};

struct BinauralSignal {
  std::vector<double> left, right;
  double fs = 44100.0;

  std::size_t length() const { return left.size(); }
  double energy() const;
};

double rms(const std::vector<double>& x);
double level_db_spl(const Signal& s);
void set_level_db_spl(Signal& s, double db_spl);

/// Two-ear level re the calibration convention (mean power of both ears).
double level_db_spl(const BinauralSignal& s);
void set_level_db_spl(BinauralSignal& s, double db_spl);

/// Per-ear full linear convolution of a mono signal with a two-channel
/// response; output length N + M - 1. Throws ConfigError on fs mismatch.
BinauralSignal spatialize(const Signal& s, const Rir& brir);

/// Scales every signal so its two-ear summed energy matches the first
/// (reference) signal. A single scalar per condition, so interaural
/// relations are untouched. Throws NumericError on zero-energy input.
void normalize_across_conditions(std::vector<BinauralSignal>& signals);

}  // namespace bmld
