#pragma once

#include <cstdint>
#include <string>

#include "bmld/rir.hpp"

namespace bmld {

/// Metadata stored next to every response WAV.
struct Sidecar {
  std::string room_id;
  double alpha = 0.0;
  double source_azimuth_deg = 0.0;
  double source_distance_m = 0.0;
  std::string receiver_pose;  // "x,y,z,facing_az"
  int max_order = 0;
  Manipulation manipulation;
  std::uint64_t tail_seed = 0;
  std::uint64_t master_seed = 0;
  double t_direct_s = 0.0;
  double fs = 0.0;
  std::string tool_version;
  std::string config_hash;
};

std::string sidecar_to_json(const Sidecar& s);
Sidecar sidecar_from_json(const std::string& json_text);

void write_sidecar(const std::string& path, const Sidecar& s);
Sidecar read_sidecar(const std::string& path);

/// FNV-1a over a canonical string; embedded in artifacts so identical
/// manifests produce byte-identical outputs.
std::string config_hash_hex(const std::string& canonical);

inline constexpr const char* kToolVersion = "bmldsim 1.0.0";

}  // namespace bmld
