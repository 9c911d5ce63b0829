#pragma once

#include <string>
#include <vector>

namespace bmld {

struct WavData {
  std::vector<std::vector<double>> channels;
  double fs = 44100.0;
};

/// 32-bit float WAV, 1..2 channels.
void write_wav(const std::string& path, const WavData& data);
WavData read_wav(const std::string& path);

}  // namespace bmld
