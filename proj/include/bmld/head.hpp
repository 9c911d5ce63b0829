#pragma once

#include "bmld/geometry.hpp"

namespace bmld {

enum class Ear { left, right };

/// Rigid spherical head, ears diametrically opposed at +/-90 degrees from the
/// facing direction in the horizontal plane. Azimuths are counterclockwise
/// positive (toward the left ear).
struct HeadModel {
  double radius_m = 0.0875;
  Vec3 position{0, 0, 0};
  Vec3 facing{1, 0, 0};  // unit length, horizontal
  double speed_of_sound = 343.0;

  Vec3 ear_axis(Ear ear) const {
    // facing rotated +/-90 degrees about z
    const Vec3 left{-facing.y, facing.x, 0.0};
    return ear == Ear::left ? left : Vec3{facing.y, -facing.x, 0.0};
  }
  Vec3 ear_position(Ear ear) const { return position + ear_axis(ear) * radius_m; }
};

/// Woodworth path delay of a plane wave around the sphere, relative to the
/// head centre: -a/c * cos(gamma) on the visible side, a/c * (gamma - pi/2)
/// in the shadow, with gamma the angle between source direction and ear axis.
double ear_delay_from_incidence(const HeadModel& head, double gamma_rad);

/// Extra arrival delay at `ear` for a source at `azimuth_deg` in the
/// horizontal plane (relative to facing).
double ear_delay(const HeadModel& head, double azimuth_deg, Ear ear);

/// First-order head-shadow filter for incidence angle gamma at one ear:
/// unity at DC, high-frequency gain alpha(gamma) above f0 = c / (2*pi*a).
/// y[n] = b0 x[n] + b1 x[n-1] - a1 y[n-1].
struct ShadowFilter {
  double b0 = 1.0, b1 = 0.0, a1 = 0.0;
};
ShadowFilter head_shadow_filter(const HeadModel& head, double gamma_rad, double fs);

}  // namespace bmld
