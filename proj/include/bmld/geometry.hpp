#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace bmld {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const { return *this / norm(); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Oriented plane n.p = d with unit normal n.
struct Plane {
  Vec3 normal;
  double offset = 0.0;

  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
  Vec3 mirror(const Vec3& p) const { return p - 2.0 * signed_distance(p) * normal; }
};

/// Planar triangle used as a specular reflector. Normal orientation follows
/// the winding of (a, b, c); Room construction winds triangles so normals
/// point into the room interior.
struct Triangle {
  Vec3 a, b, c;

  Plane plane() const {
    Vec3 n = (b - a).cross(c - a).normalized();
    return {n, n.dot(a)};
  }
  double area() const { return 0.5 * (b - a).cross(c - a).norm(); }
  Vec3 centroid() const { return (a + b + c) / 3.0; }
};

/// Intersection of segment [p, q] with the triangle, inclusive of edges.
/// Returns the hit point when the segment crosses the triangle's plane inside
/// the triangle (within eps), otherwise nullopt.
std::optional<Vec3> segment_triangle_intersection(const Triangle& tri, const Vec3& p,
                                                  const Vec3& q, double eps = 1e-9);

/// Point-in-triangle test for a point already known to lie on the plane.
bool point_in_triangle(const Triangle& tri, const Vec3& p, double eps = 1e-9);

}  // namespace bmld
