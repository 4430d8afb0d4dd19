#pragma once

#include <cstdint>

#include "cadseq/geom/solid.hpp"
#include "cadseq/pointcloud.hpp"

namespace cadseq::geom {

// Candidate budget multiplier before surface sampling gives up on a solid.
inline constexpr int kSampleRetryFactor = 20;

// Draws n points approximately uniform over the exposed boundary of the CSG
// result, with outward unit normals. Candidates are drawn area-weighted from
// each primitive's parametric boundary (walls exactly on the analytic ruled
// surfaces, caps exactly on the sketch planes) and kept when probing
// +-eps along the face normal shows the final solid on exactly one side;
// faces exposed by a Cut keep the flipped normal. Throws SamplingError when
// fewer than n boundary points survive a 20x candidate budget (empty or
// degenerate solids).
PointCloud sample_surface(const SolidModel& s, std::size_t n, std::uint64_t seed);

}  // namespace cadseq::geom
