#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cadseq/geom/solid.hpp"

namespace cadseq::metrics {

struct Rotation {
  // Row-major 3x3 orthonormal matrix, det +1.
  std::array<double, 9> m;

  Vec3 apply(const Vec3& v) const;
  Vec3 apply_transposed(const Vec3& v) const;  // inverse for rotations
};

// The 24 rotations of the axis-aligned octahedral group, in a fixed order.
const std::vector<Rotation>& octahedral_rotations();

struct IouOptions {
  bool normalize = true;     // center on the MC centroid, bbox diagonal -> 1
  bool align_search = true;  // max over octahedral rotations of the second solid
  std::size_t samples = 100000;
};

// Volume intersection-over-union by Monte Carlo membership over the joint
// bounding box. With align_search the result is the max over the 24
// octahedral rotations of s2 (applied after normalization). Throws EmptySolid
// when either solid has no measurable volume.
double iou_aligned(const geom::SolidModel& s1, const geom::SolidModel& s2,
                   std::size_t n, std::uint64_t seed,
                   const IouOptions& options = {});

}  // namespace cadseq::metrics
