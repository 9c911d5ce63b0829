#include "bmld/room.hpp"

#include <cmath>

#include "bmld/error.hpp"

namespace bmld {

double Wall::reflection_factor() const {
  return std::sqrt(1.0 - absorption[0]);
}

bool Room::contains(const Vec3& p, double eps) const {
  for (const auto& tri : triangles) {
    if (tri.plane().signed_distance(p) < eps) return false;
  }
  return true;
}

double Room::volume() const {
  // Divergence theorem with inward normals: V = -1/6 sum a.(b x c) over
  // inward-wound triangles equals +1/6 with outward winding.
  double v = 0.0;
  for (const auto& tri : triangles) {
    v -= tri.a.dot(tri.b.cross(tri.c)) / 6.0;
  }
  return std::abs(v);
}

double Room::surface_area() const {
  double s = 0.0;
  for (const auto& tri : triangles) s += tri.area();
  return s;
}

double Room::eyring_rt60(double alpha) const {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw ConfigError("eyring_rt60: alpha must be in (0, 1)");
  }
  return 0.161 * volume() / (-surface_area() * std::log(1.0 - alpha));
}

namespace {

Triangle oriented_inward(Vec3 a, Vec3 b, Vec3 c, const Vec3& interior) {
  Triangle t{a, b, c};
  const Vec3 n = (b - a).cross(c - a);
  if (n.norm() < 1e-12) throw ConfigError("build_room: degenerate triangle");
  if (n.dot(interior - a) < 0.0) std::swap(t.b, t.c);
  return t;
}

}  // namespace

Room build_room(const std::array<Vec3, 8>& corners, double alpha,
                const std::string& id) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("build_room: absorption must be in [0, 1]");
  }

  Room room;
  room.id = id;
  room.interior_point = {0, 0, 0};
  for (const auto& c : corners) room.interior_point += c / 8.0;

  // Quads in corner indices: floor 1-4, ceiling 5-8, four sides.
  struct QuadSpec {
    std::string name;
    std::array<int, 4> idx;
  };
  const QuadSpec quads[6] = {
      {"floor", {0, 1, 2, 3}},   {"ceiling", {4, 5, 6, 7}},
      {"west", {0, 1, 5, 4}},    {"north", {1, 2, 6, 5}},
      {"east", {2, 3, 7, 6}},    {"south", {3, 0, 4, 7}},
  };

  for (int w = 0; w < 6; ++w) {
    const auto& q = quads[w];
    const Vec3& a = corners[q.idx[0]];
    const Vec3& b = corners[q.idx[1]];
    const Vec3& c = corners[q.idx[2]];
    const Vec3& d = corners[q.idx[3]];
    Triangle t1 = oriented_inward(a, b, c, room.interior_point);
    Triangle t2 = oriented_inward(a, c, d, room.interior_point);
    Wall wall;
    wall.name = q.name;
    wall.absorption.fill(alpha);
    wall.triangles = {static_cast<int>(room.triangles.size()),
                      static_cast<int>(room.triangles.size()) + 1};
    room.triangles.push_back(t1);
    room.triangles.push_back(t2);
    room.wall_of_triangle.push_back(w);
    room.wall_of_triangle.push_back(w);
    room.walls.push_back(wall);
  }

  if (!room.contains(room.interior_point, 1e-9)) {
    throw ConfigError("build_room: corner set does not enclose its centroid");
  }
  if (room.volume() < 1e-6) {
    throw ConfigError("build_room: degenerate (near-zero volume) geometry");
  }

  room.convex = true;
  for (const auto& tri : room.triangles) {
    const Plane pl = tri.plane();
    for (const auto& c : corners) {
      if (pl.signed_distance(c) < -1e-9) {
        room.convex = false;
        break;
      }
    }
    if (!room.convex) break;
  }
  return room;
}

Room build_shoebox(double length_x, double width_y, double height_z, double alpha,
                   const std::string& id) {
  if (length_x <= 0 || width_y <= 0 || height_z <= 0) {
    throw ConfigError("build_shoebox: dimensions must be positive");
  }
  const double L = length_x, W = width_y, H = height_z;
  const std::array<Vec3, 8> corners = {
      Vec3{0, 0, 0}, Vec3{0, W, 0}, Vec3{L, W, 0}, Vec3{L, 0, 0},
      Vec3{0, 0, H}, Vec3{0, W, H}, Vec3{L, W, H}, Vec3{L, 0, H},
  };
  return build_room(corners, alpha, id);
}

Room paper_room(double alpha) {
  // Corner coordinates of the jittered experimental room, floor S1-S4 then
  // ceiling S5-S8.
  const std::array<Vec3, 8> corners = {
      Vec3{0.00, 0.00, 0.00},  Vec3{0.77, 17.49, 0.15},
      Vec3{8.06, 16.71, 0.19}, Vec3{7.24, -0.39, 0.31},
      Vec3{0.01, 0.02, 3.12},  Vec3{0.46, 17.14, 2.84},
      Vec3{7.58, 16.49, 3.04}, Vec3{7.01, -0.12, 3.35},
  };
  return build_room(corners, alpha, "paper");
}

Room braasch_room(double alpha) { return build_shoebox(5.0, 6.0, 3.0, alpha, "braasch"); }

Room zurek_room(double alpha) { return build_shoebox(4.8, 6.6, 2.6, alpha, "zurek"); }

}  // namespace bmld
