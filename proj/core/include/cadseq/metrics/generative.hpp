#pragma once

#include <vector>

#include "cadseq/pointcloud.hpp"

namespace cadseq::metrics {

struct GenerationQuality {
  double jsd = 0.0;  // Jensen-Shannon divergence of voxel occupancy, in nats
  double cov = 0.0;  // fraction of reference clouds matched by some generated one
  double mmd = 0.0;  // mean over reference of chamfer to the nearest generated
};

inline constexpr int kDefaultJsdResolution = 28;

// Distributional comparison of a generated shape set against a reference set.
// JSD compares voxel-occupancy distributions over a resolution^3 grid of the
// [-1, 1]^3 model box (points outside clamp to the border cells); COV and MMD
// use chamfer distance between clouds. Throws Error on empty sets.
GenerationQuality generation_quality(const std::vector<PointCloud>& generated,
                                     const std::vector<PointCloud>& reference,
                                     int jsd_resolution = kDefaultJsdResolution);

}  // namespace cadseq::metrics
