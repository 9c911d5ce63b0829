#include "bmld/geometry.hpp"

namespace bmld {

bool point_in_triangle(const Triangle& tri, const Vec3& p, double eps) {
  // Barycentric coordinates relative to vertex a.
  const Vec3 v0 = tri.b - tri.a;
  const Vec3 v1 = tri.c - tri.a;
  const Vec3 v2 = p - tri.a;
  const double d00 = v0.dot(v0);
  const double d01 = v0.dot(v1);
  const double d11 = v1.dot(v1);
  const double d20 = v2.dot(v0);
  const double d21 = v2.dot(v1);
  const double denom = d00 * d11 - d01 * d01;
  if (denom <= 0.0) return false;
  const double v = (d11 * d20 - d01 * d21) / denom;
  const double w = (d00 * d21 - d01 * d20) / denom;
  return v >= -eps && w >= -eps && v + w <= 1.0 + eps;
}

std::optional<Vec3> segment_triangle_intersection(const Triangle& tri, const Vec3& p,
                                                  const Vec3& q, double eps) {
  const Plane pl = tri.plane();
  const double dp = pl.signed_distance(p);
  const double dq = pl.signed_distance(q);
  if ((dp > eps && dq > eps) || (dp < -eps && dq < -eps)) return std::nullopt;
  const double denom = dp - dq;
  if (std::abs(denom) < 1e-15) return std::nullopt;  // segment parallel to plane
  const double t = dp / denom;
  if (t < -eps || t > 1.0 + eps) return std::nullopt;
  const Vec3 hit = p + (q - p) * t;
  if (!point_in_triangle(tri, hit, eps)) return std::nullopt;
  return hit;
}

}  // namespace bmld
