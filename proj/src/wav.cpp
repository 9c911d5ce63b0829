#include "bmld/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "bmld/error.hpp"

namespace bmld {

namespace {

void put_u32(std::ofstream& f, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  f.write(b, 4);
}

void put_u16(std::ofstream& f, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  f.write(b, 2);
}

std::uint32_t get_u32(std::ifstream& f) {
  unsigned char b[4];
  f.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t get_u16(std::ifstream& f) {
  unsigned char b[2];
  f.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

void write_wav(const std::string& path, const WavData& data) {
  if (data.channels.empty() || data.channels.size() > 2) {
    throw ConfigError("write_wav: need 1 or 2 channels");
  }
  const std::uint16_t nch = static_cast<std::uint16_t>(data.channels.size());
  const std::uint32_t frames = static_cast<std::uint32_t>(data.channels[0].size());
  for (const auto& ch : data.channels) {
    if (ch.size() != frames) throw ConfigError("write_wav: channel length mismatch");
  }
  const std::uint32_t rate = static_cast<std::uint32_t>(data.fs);
  const std::uint32_t data_bytes = frames * nch * 4;

  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("write_wav: cannot open " + path);
  f.write("RIFF", 4);
  put_u32(f, 4 + 26 + 8 + data_bytes);  // fmt chunk is 18 bytes (extensible-safe 0 ext)
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  put_u32(f, 18);
  put_u16(f, 3);  // IEEE float
  put_u16(f, nch);
  put_u32(f, rate);
  put_u32(f, rate * nch * 4);
  put_u16(f, static_cast<std::uint16_t>(nch * 4));
  put_u16(f, 32);
  put_u16(f, 0);  // no extension
  f.write("data", 4);
  put_u32(f, data_bytes);
  for (std::uint32_t i = 0; i < frames; ++i) {
    for (std::uint16_t c = 0; c < nch; ++c) {
      const float v = static_cast<float>(data.channels[c][i]);
      char b[4];
      std::memcpy(b, &v, 4);
      f.write(b, 4);
    }
  }
}

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("read_wav: cannot open " + path);
  char tag[5] = {0};
  f.read(tag, 4);
  if (std::strncmp(tag, "RIFF", 4) != 0) throw ConfigError("read_wav: not a RIFF file");
  get_u32(f);
  f.read(tag, 4);
  if (std::strncmp(tag, "WAVE", 4) != 0) throw ConfigError("read_wav: not a WAVE file");

  WavData out;
  std::uint16_t format = 0, nch = 0, bits = 0;
  while (f.read(tag, 4)) {
    const std::uint32_t size = get_u32(f);
    if (std::strncmp(tag, "fmt ", 4) == 0) {
      format = get_u16(f);
      nch = get_u16(f);
      out.fs = get_u32(f);
      get_u32(f);
      get_u16(f);
      bits = get_u16(f);
      f.seekg(size - 16, std::ios::cur);
    } else if (std::strncmp(tag, "data", 4) == 0) {
      if (format != 3 || bits != 32) throw ConfigError("read_wav: expected 32-bit float");
      if (nch < 1 || nch > 2) throw ConfigError("read_wav: need 1 or 2 channels");
      const std::uint32_t frames = size / (nch * 4);
      out.channels.assign(nch, std::vector<double>(frames));
      for (std::uint32_t i = 0; i < frames; ++i) {
        for (std::uint16_t c = 0; c < nch; ++c) {
          char b[4];
          f.read(b, 4);
          float v;
          std::memcpy(&v, b, 4);
          out.channels[c][i] = v;
        }
      }
      return out;
    } else {
      f.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw ConfigError("read_wav: missing data chunk");
}

}  // namespace bmld
