#pragma once

#include <array>
#include <string>
#include <vector>

#include "bmld/geometry.hpp"

namespace bmld {

/// Nominal octave bands sharing one absorption value (125 Hz .. 4 kHz).
inline constexpr int kNumAbsorptionBands = 6;

struct Wall {
  std::string name;                   // floor, ceiling, west, north, east, south
  std::array<int, 2> triangles;       // indices into Room::triangles
  std::array<double, kNumAbsorptionBands> absorption{};

  /// Frequency-flat amplitude reflection factor sqrt(1 - alpha). All rooms in
  /// this project use one alpha across bands, so band 0 is representative.
  double reflection_factor() const;
};

struct Room {
  std::string id;
  std::vector<Triangle> triangles;    // normals point into the interior
  std::vector<int> wall_of_triangle;  // triangle index -> wall index
  std::vector<Wall> walls;
  Vec3 interior_point;                // centroid of the corners
  bool convex = false;

  bool contains(const Vec3& p, double eps = 1e-9) const;
  double volume() const;
  double surface_area() const;
  /// Eyring reverberation time for a uniform absorption coefficient.
  double eyring_rt60(double alpha) const;
};

/// Builds a six-walled room from 8 corners ordered as: floor 1-4 clockwise,
/// then ceiling 5-8 above them. Non-planar quads are split into two triangles
/// that share the wall's absorption. Throws ConfigError for degenerate
/// geometry or absorption outside [0, 1].
Room build_room(const std::array<Vec3, 8>& corners, double alpha,
                const std::string& id = "custom");

/// Axis-aligned shoebox [0,L]x[0,W]x[0,H].
Room build_shoebox(double length_x, double width_y, double height_z, double alpha,
                   const std::string& id = "shoebox");

/// The jittered-corner room of the listening experiments (Table A2 geometry).
Room paper_room(double alpha);
/// Rectangular 5 x 6 x 3 m room used for the broadband replication.
Room braasch_room(double alpha);
/// Rectangular 4.8 x 6.6 x 2.6 m room used for the narrowband replication.
Room zurek_room(double alpha);

}  // namespace bmld
