#include "bmld/head.hpp"

#include <algorithm>
#include <cmath>

#include "bmld/dsp.hpp"

namespace bmld {

double ear_delay_from_incidence(const HeadModel& head, double gamma_rad) {
  const double a_c = head.radius_m / head.speed_of_sound;
  if (gamma_rad <= kPi / 2.0) return -a_c * std::cos(gamma_rad);
  return a_c * (gamma_rad - kPi / 2.0);
}

double ear_delay(const HeadModel& head, double azimuth_deg, Ear ear) {
  const double az = azimuth_deg * kPi / 180.0;
  // angle between the source direction and the ear axis
  const double ear_az = (ear == Ear::left) ? kPi / 2.0 : -kPi / 2.0;
  double diff = az - ear_az;
  while (diff > kPi) diff -= 2.0 * kPi;
  while (diff < -kPi) diff += 2.0 * kPi;
  return ear_delay_from_incidence(head, std::abs(diff));
}

ShadowFilter head_shadow_filter(const HeadModel& head, double gamma_rad, double fs) {
  // High-frequency gain after Brown & Duda: +6 dB facing the ear, deepest
  // shadow around 150 degrees, slight bright spot behind.
  const double alpha = std::clamp(1.05 + 0.95 * std::cos(1.2 * gamma_rad), 0.1, 2.0);
  const double w0 = head.speed_of_sound / head.radius_m;  // = 2*pi*f0
  const double q = 2.0 * fs / w0;
  ShadowFilter f;
  f.b0 = (alpha * q + 1.0) / (q + 1.0);
  f.b1 = (1.0 - alpha * q) / (q + 1.0);
  f.a1 = (1.0 - q) / (q + 1.0);
  return f;
}

}  // namespace bmld
