#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spaloha/random.hpp"

namespace spaloha {

// The arena is the sphere of total area 1: radius 1/sqrt(4*pi). All
// distances are 3D chords, so the largest possible separation is the
// diameter 2R and the set of points within chord r of a fixed point is a
// spherical cap of area pi*r^2.
inline const double kSphereRadius = 0.28209479177387814;  // 1/sqrt(4*pi)
inline const double kSphereDiameter = 2.0 * kSphereRadius;

struct SpherePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const SpherePoint&) const = default;
};

// True when |p| matches the sphere radius to 1e-12 relative tolerance.
bool on_sphere(const SpherePoint& p);

// Exactly uniform point on the sphere surface (Archimedes: z uniform on
// [-R, R], azimuth uniform). Consumes two draws.
SpherePoint sample_uniform(Rng& rng);

// 3D straight-line distance between two surface points, in [0, 2R].
double chord_distance(const SpherePoint& p, const SpherePoint& q);

// Area of the spherical cap of chord radius r: pi*r^2 on this sphere, with
// cap_area(2R) == 1 exactly. Throws std::domain_error outside [0, 2R].
double cap_area(double r);

// Polar angle in [0, pi] and azimuth in [0, 2*pi).
double polar_angle(const SpherePoint& p);
double azimuth(const SpherePoint& p);

// One cell of the latitude-band partition. Ranges are closed on both ends;
// cells overlap only on their (measure zero) boundaries.
struct PartitionCell {
  std::uint32_t cell_id = 0;
  std::uint32_t band_index = 0;
  std::uint32_t sector_index = 0;
  double polar_lo = 0.0;
  double polar_hi = 0.0;
  double azimuth_lo = 0.0;
  double azimuth_hi = 0.0;
};

// Splits the sphere into finitely many cells, each of chord diameter <= r.
// Latitude bands of equal angular height, each cut into equal azimuthal
// sectors; band height and sector widths are chosen so the meridian leg and
// the parallel leg of any in-cell path each contribute at most r/2. The cell
// count is finite but not minimal. r >= 2R yields the single whole-sphere
// cell; r <= 0 throws std::domain_error.
std::vector<PartitionCell> partition_sphere(double r);

bool cell_contains(const PartitionCell& cell, const SpherePoint& p);

// Id of the first cell (in cell_id order) containing p; ties on shared
// boundaries therefore resolve to the lower index. Total on the sphere.
std::uint32_t locate_cell(const SpherePoint& p,
                          std::span<const PartitionCell> cells);

// Uniform point inside one cell (cos(polar) and azimuth both uniform over
// the cell ranges). Used by the partition audits.
SpherePoint sample_in_cell(const PartitionCell& cell, Rng& rng);

}  // namespace spaloha
