#include "bmld/sidecar.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bmld/error.hpp"

namespace bmld {

using nlohmann::json;

std::string sidecar_to_json(const Sidecar& s) {
  json j;
  j["room_id"] = s.room_id;
  j["alpha"] = s.alpha;
  j["source_azimuth_deg"] = s.source_azimuth_deg;
  j["source_distance_m"] = s.source_distance_m;
  j["receiver_pose"] = s.receiver_pose;
  j["max_order"] = s.max_order;
  j["manipulation"] = {{"mode", s.manipulation.mode_name()}, {"t_ms", s.manipulation.t_ms}};
  j["seeds"] = {{"tail", s.tail_seed}, {"master", s.master_seed}};
  j["t_direct_s"] = s.t_direct_s;
  j["fs"] = s.fs;
  j["tool_version"] = s.tool_version;
  j["config_hash"] = s.config_hash;
  return j.dump(2) + "\n";
}

Sidecar sidecar_from_json(const std::string& text) {
  json j = json::parse(text);
  Sidecar s;
  s.room_id = j.at("room_id").get<std::string>();
  s.alpha = j.at("alpha").get<double>();
  s.source_azimuth_deg = j.at("source_azimuth_deg").get<double>();
  s.source_distance_m = j.at("source_distance_m").get<double>();
  s.receiver_pose = j.at("receiver_pose").get<std::string>();
  s.max_order = j.at("max_order").get<int>();
  const std::string mode = j.at("manipulation").at("mode").get<std::string>();
  s.manipulation.mode = mode == "truncate" ? Manipulation::Mode::truncate
                        : mode == "cut"    ? Manipulation::Mode::cut
                                           : Manipulation::Mode::none;
  s.manipulation.t_ms = j.at("manipulation").at("t_ms").get<double>();
  s.tail_seed = j.at("seeds").at("tail").get<std::uint64_t>();
  s.master_seed = j.at("seeds").at("master").get<std::uint64_t>();
  s.t_direct_s = j.at("t_direct_s").get<double>();
  s.fs = j.at("fs").get<double>();
  s.tool_version = j.at("tool_version").get<std::string>();
  s.config_hash = j.at("config_hash").get<std::string>();
  return s;
}

void write_sidecar(const std::string& path, const Sidecar& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("write_sidecar: cannot open " + path);
  f << sidecar_to_json(s);
}

Sidecar read_sidecar(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("read_sidecar: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return sidecar_from_json(ss.str());
}

std::string config_hash_hex(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bmld
