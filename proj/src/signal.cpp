#include "bmld/signal.hpp"

#include <cmath>

#include "bmld/dsp.hpp"
#include "bmld/error.hpp"

namespace bmld {

double rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double BinauralSignal::energy() const {
  double acc = 0.0;
  for (double v : left) acc += v * v;
  for (double v : right) acc += v * v;
  return acc;
}

double level_db_spl(const Signal& s) {
  const double r = rms(s.samples);
  return kFullScaleDbSpl + 20.0 * std::log10(r);
}

void set_level_db_spl(Signal& s, double db_spl) {
  const double r = rms(s.samples);
  if (r <= 0.0) throw NumericError("set_level_db_spl: zero-energy signal");
  const double target = std::pow(10.0, (db_spl - kFullScaleDbSpl) / 20.0);
  const double g = target / r;
  for (auto& v : s.samples) v *= g;
}

double level_db_spl(const BinauralSignal& s) {
  if (s.left.empty()) return -std::numeric_limits<double>::infinity();
  const double p = s.energy() / (2.0 * static_cast<double>(s.left.size()));
  return kFullScaleDbSpl + 10.0 * std::log10(p);
}

void set_level_db_spl(BinauralSignal& s, double db_spl) {
  const double now = level_db_spl(s);
  if (!std::isfinite(now)) throw NumericError("set_level_db_spl: zero-energy signal");
  const double g = std::pow(10.0, (db_spl - now) / 20.0);
  for (auto& v : s.left) v *= g;
  for (auto& v : s.right) v *= g;
}

BinauralSignal spatialize(const Signal& s, const Rir& brir) {
  if (s.fs != brir.fs) throw ConfigError("spatialize: sample rate mismatch");
  if (brir.num_channels() < 1 || brir.num_channels() > 2) {
    throw ConfigError("spatialize: response must have 1 or 2 channels");
  }
  BinauralSignal out;
  out.fs = s.fs;
  out.left = convolve(s.samples, brir.channels[0]);
  out.right = convolve(s.samples, brir.channels[brir.num_channels() == 2 ? 1 : 0]);
  return out;
}

void normalize_across_conditions(std::vector<BinauralSignal>& signals) {
  if (signals.empty()) throw ConfigError("normalize_across_conditions: empty list");
  const double ref = signals.front().energy();
  if (ref <= 0.0) throw NumericError("normalize_across_conditions: zero-energy reference");
  for (auto& s : signals) {
    const double e = s.energy();
    if (e <= 0.0) throw NumericError("normalize_across_conditions: zero-energy signal");
    const double g = std::sqrt(ref / e);
    for (auto& v : s.left) v *= g;
    for (auto& v : s.right) v *= g;
  }
}

}  // namespace bmld
