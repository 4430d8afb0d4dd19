#pragma once

#include <vector>

#include "cadseq/pointcloud.hpp"

namespace cadseq::metrics {

// Symmetric chamfer distance: mean squared nearest-neighbor distance from a
// to b plus the reverse direction, scaled by 1000 to match the customary
// reporting magnitude. Throws Error on empty inputs.
double chamfer_distance(const PointCloud& a, const PointCloud& b);

inline constexpr double kChamferScale = 1000.0;

// Exact nearest-neighbor index for each query against `points` (kd-tree).
// Exposed for the retrieval-free consumers (coverage / matching distances).
std::vector<std::size_t> nearest_neighbors(const std::vector<Vec3>& points,
                                           const std::vector<Vec3>& queries);

// Squared Euclidean distance; shared so kd-tree results are bit-identical
// with brute-force evaluation.
inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace cadseq::metrics
