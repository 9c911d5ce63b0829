#include "bmld/image_source.hpp"

#include <algorithm>
#include <cmath>

#include "bmld/error.hpp"

namespace bmld {

namespace {

constexpr double kSideEps = 1e-9;
constexpr double kContainEps = 1e-9;

struct Enumerator {
  const Room& room;
  Vec3 source, receiver;
  IsmOptions opt;
  double direct_distance;
  std::vector<Plane> planes;          // one per triangle
  std::vector<double> wall_factor;    // reflection factor per triangle

  std::vector<int> chain;             // triangle indices along current path
  std::vector<Vec3> images;           // image after each mirror in `chain`
  std::vector<ImageSource> out;

  Enumerator(const Room& r, const Vec3& s, const Vec3& rcv, const IsmOptions& o)
      : room(r), source(s), receiver(rcv), opt(o) {
    direct_distance = (s - rcv).norm();
    planes.reserve(room.triangles.size());
    wall_factor.reserve(room.triangles.size());
    for (size_t t = 0; t < room.triangles.size(); ++t) {
      planes.push_back(room.triangles[t].plane());
      wall_factor.push_back(room.walls[room.wall_of_triangle[t]].reflection_factor());
    }
  }

  bool obstructed(const Vec3& from, const Vec3& to, int skip_tri_a, int skip_tri_b) const {
    const int wall_a = skip_tri_a >= 0 ? room.wall_of_triangle[skip_tri_a] : -1;
    const int wall_b = skip_tri_b >= 0 ? room.wall_of_triangle[skip_tri_b] : -1;
    const double seg_len = (to - from).norm();
    for (size_t t = 0; t < room.triangles.size(); ++t) {
      const int w = room.wall_of_triangle[t];
      // The endpoints lie on (or at) the excluded walls; their triangles and
      // siblings cannot obstruct the segment.
      if (w == wall_a || w == wall_b) continue;
      auto hit = segment_triangle_intersection(room.triangles[t], from, to);
      if (!hit) continue;
      const double da = (*hit - from).norm();
      const double db = (*hit - to).norm();
      if (da > 1e-6 * seg_len && db > 1e-6 * seg_len) return true;
    }
    return false;
  }

  /// Backtracking visibility of the current chain from the receiver.
  bool chain_visible() const {
    Vec3 p = receiver;
    int p_tri = -1;
    for (int j = static_cast<int>(chain.size()) - 1; j >= 0; --j) {
      const int tri = chain[j];
      auto hit = segment_triangle_intersection(room.triangles[tri], p, images[j]);
      if (!hit) return false;
      if (obstructed(p, *hit, p_tri, tri)) return false;
      p = *hit;
      p_tri = tri;
    }
    return !obstructed(p, source, p_tri, -1);
  }

  void emit(bool visible) {
    if (!visible) return;
    ImageSource img;
    img.position = chain.empty() ? source : images.back();
    img.order = static_cast<int>(chain.size());
    img.wall_sequence.reserve(chain.size());
    for (int tri : chain) img.wall_sequence.push_back(room.wall_of_triangle[tri]);
    img.amplitude_factor = 1.0;
    for (int tri : chain) img.amplitude_factor *= wall_factor[tri];
    img.arrival_time_s = (img.position - receiver).norm() / opt.speed_of_sound;
    img.visible = true;
    out.push_back(std::move(img));
  }

  void recurse(const Vec3& image, double factor, int invisible_run) {
    const bool visible = chain_visible();
    emit(visible);
    const int run = visible ? 0 : invisible_run + 1;
    if (run > opt.invisible_parent_limit) return;
    if (static_cast<int>(chain.size()) >= opt.max_order) return;

    for (size_t t = 0; t < room.triangles.size(); ++t) {
      // A mirror is valid only for a parent on the interior side of the plane.
      if (planes[t].signed_distance(image) <= kSideEps) continue;
      const Vec3 child = planes[t].mirror(image);
      const double child_factor = factor * wall_factor[t];
      const double r = (child - receiver).norm();
      // Distance to the receiver is non-decreasing along side-valid chains, so
      // the level and arrival-time prunes cut whole subtrees.
      if (r / opt.speed_of_sound > opt.max_time_s) continue;
      if (child_factor <= 0.0) continue;
      const double level_db = 20.0 * std::log10(child_factor * direct_distance / r);
      if (level_db <= -opt.level_cutoff_db) continue;

      chain.push_back(static_cast<int>(t));
      images.push_back(child);
      recurse(child, child_factor, run);
      chain.pop_back();
      images.pop_back();
    }
  }
};

}  // namespace

ImageSourceSet compute_image_sources(const Room& room, const Vec3& source,
                                     const Vec3& receiver, const IsmOptions& options) {
  if (options.max_order < 0) throw ConfigError("compute_image_sources: max_order < 0");
  if (!room.contains(source, kContainEps)) {
    throw ConfigError("compute_image_sources: source outside room");
  }
  if (!room.contains(receiver, kContainEps)) {
    throw ConfigError("compute_image_sources: receiver outside room");
  }

  Enumerator e(room, source, receiver, options);
  e.recurse(source, 1.0, 0);

  auto& sources = e.out;
  std::sort(sources.begin(), sources.end(), [](const ImageSource& a, const ImageSource& b) {
    if (a.order != b.order) return a.order < b.order;
    if (a.arrival_time_s != b.arrival_time_s) return a.arrival_time_s < b.arrival_time_s;
    if (a.position.x != b.position.x) return a.position.x < b.position.x;
    if (a.position.y != b.position.y) return a.position.y < b.position.y;
    return a.position.z < b.position.z;
  });
  // Exactly coplanar triangle pairs (shoebox walls) can validate the same
  // physical image through both triangles when the reflection point lies on
  // the shared edge; collapse such duplicates.
  std::vector<ImageSource> unique;
  unique.reserve(sources.size());
  for (auto& s : sources) {
    if (!unique.empty() && unique.back().order == s.order &&
        (unique.back().position - s.position).norm() < 1e-7) {
      continue;
    }
    unique.push_back(std::move(s));
  }

  ImageSourceSet set;
  set.sources = std::move(unique);
  set.source = source;
  set.receiver = receiver;
  set.speed_of_sound = options.speed_of_sound;
  return set;
}

}  // namespace bmld
