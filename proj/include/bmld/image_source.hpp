#pragma once

#include <limits>
#include <vector>

#include "bmld/room.hpp"

namespace bmld {

struct ImageSource {
  Vec3 position;
  int order = 0;
  std::vector<int> wall_sequence;  // logical wall indices, first bounce first
  double amplitude_factor = 1.0;   // product of sqrt(1 - alpha) over the sequence
  double arrival_time_s = 0.0;     // |position - receiver| / c
  bool visible = true;
};

struct IsmOptions {
  int max_order = 8;
  int invisible_parent_limit = 7;   // prune after a longer run of invisible ancestors
  double level_cutoff_db = 80.0;    // prune images this far below the direct level
  double max_time_s = std::numeric_limits<double>::infinity();
  double speed_of_sound = 343.0;
};

struct ImageSourceSet {
  std::vector<ImageSource> sources;  // canonical order: (order, arrival time)
  Vec3 source, receiver;
  double speed_of_sound = 343.0;
};

/// Enumerates validated image sources of a polygonal room by depth-first
/// mirroring over wall triangles. Every returned source passes the
/// backtracking visibility test: each reflection point lies inside its
/// triangle and no segment of the unfolded path is obstructed. Branches are
/// abandoned once a run of more than `invisible_parent_limit` consecutive
/// invisible ancestors occurs, once the level falls `level_cutoff_db` below
/// the direct sound, or once the arrival time exceeds `max_time_s`.
ImageSourceSet compute_image_sources(const Room& room, const Vec3& source,
                                     const Vec3& receiver, const IsmOptions& options);

}  // namespace bmld
