#include "spaloha/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spaloha {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

bool on_sphere(const SpherePoint& p) {
  const double norm = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  return std::abs(norm - kSphereRadius) <= 1e-12 * kSphereRadius;
}

SpherePoint sample_uniform(Rng& rng) {
  const double z = kSphereRadius * (2.0 * rng.uniform01() - 1.0);
  const double phi = kTwoPi * rng.uniform01();
  const double rho = std::sqrt(std::max(0.0, kSphereRadius * kSphereRadius - z * z));
  return SpherePoint{rho * std::cos(phi), rho * std::sin(phi), z};
}

double chord_distance(const SpherePoint& p, const SpherePoint& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double cap_area(double r) {
  if (!(r >= 0.0 && r <= kSphereDiameter)) {
    throw std::domain_error("cap_area: chord radius outside [0, 2R]");
  }
  if (r == kSphereDiameter) return 1.0;  // whole sphere, exact
  return kPi * r * r;
}

double polar_angle(const SpherePoint& p) {
  const double c = std::clamp(p.z / kSphereRadius, -1.0, 1.0);
  return std::acos(c);
}

double azimuth(const SpherePoint& p) {
  double phi = std::atan2(p.y, p.x);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

std::vector<PartitionCell> partition_sphere(double r) {
  if (!(r > 0.0)) {
    throw std::domain_error("partition_sphere: r must be positive");
  }
  if (r >= kSphereDiameter) {
    return {PartitionCell{0, 0, 0, 0.0, kPi, 0.0, kTwoPi}};
  }

  // Chord along a meridian over polar step d is 2R sin(d/2); keep it <= r/2.
  const double quarter = r / (4.0 * kSphereRadius);
  const double band_step_max = 2.0 * std::asin(std::min(1.0, quarter));
  const auto n_bands =
      static_cast<std::uint32_t>(std::ceil(kPi / band_step_max));
  const double band_step = kPi / n_bands;

  std::vector<PartitionCell> cells;
  for (std::uint32_t band = 0; band < n_bands; ++band) {
    const double lo = band * band_step;
    const double hi = (band + 1 == n_bands) ? kPi : (band + 1) * band_step;
    // Largest sin(theta) over the band bounds the parallel-leg chord.
    double sin_max;
    if (lo <= kPi / 2.0 && hi >= kPi / 2.0) {
      sin_max = 1.0;
    } else {
      sin_max = std::max(std::sin(lo), std::sin(hi));
    }
    std::uint32_t n_sectors = 1;
    const double arg = r / (4.0 * kSphereRadius * sin_max);
    if (arg < 1.0) {
      const double sector_max = 2.0 * std::asin(arg);
      n_sectors = static_cast<std::uint32_t>(std::ceil(kTwoPi / sector_max));
    }
    const double sector_step = kTwoPi / n_sectors;
    for (std::uint32_t sector = 0; sector < n_sectors; ++sector) {
      const double az_lo = sector * sector_step;
      const double az_hi =
          (sector + 1 == n_sectors) ? kTwoPi : (sector + 1) * sector_step;
      cells.push_back(PartitionCell{static_cast<std::uint32_t>(cells.size()),
                                    band, sector, lo, hi, az_lo, az_hi});
    }
  }
  return cells;
}

bool cell_contains(const PartitionCell& cell, const SpherePoint& p) {
  const double theta = polar_angle(p);
  const double phi = azimuth(p);
  return theta >= cell.polar_lo && theta <= cell.polar_hi &&
         phi >= cell.azimuth_lo && phi <= cell.azimuth_hi;
}

std::uint32_t locate_cell(const SpherePoint& p,
                          std::span<const PartitionCell> cells) {
  for (const PartitionCell& cell : cells) {
    if (cell_contains(cell, p)) return cell.cell_id;
  }
  // Unreachable for partitions built by partition_sphere: bands cover
  // [0, pi], sectors cover [0, 2*pi], and both ranges are closed.
  throw std::logic_error("locate_cell: point not covered by any cell");
}

SpherePoint sample_in_cell(const PartitionCell& cell, Rng& rng) {
  const double c_hi = std::cos(cell.polar_lo);
  const double c_lo = std::cos(cell.polar_hi);
  const double c = c_lo + (c_hi - c_lo) * rng.uniform01();
  const double phi =
      cell.azimuth_lo + (cell.azimuth_hi - cell.azimuth_lo) * rng.uniform01();
  const double z = kSphereRadius * std::clamp(c, -1.0, 1.0);
  const double rho =
      std::sqrt(std::max(0.0, kSphereRadius * kSphereRadius - z * z));
  return SpherePoint{rho * std::cos(phi), rho * std::sin(phi), z};
}

}  // namespace spaloha
