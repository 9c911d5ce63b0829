#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bmld {

/// Deterministic random stream. Wraps mt19937_64 with an explicit Box-Muller
/// normal so sequences are identical across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  double uniform() {  // [0, 1)
    return std::generate_canonical<double, 53>(engine_);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t integer() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream; distinct tags give distinct streams.
  Rng fork(std::uint64_t tag) const {
    // splitmix64 of (seed ^ rotated tag) gives well-separated child seeds
    std::uint64_t z = seed_ ^ (tag + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bmld
