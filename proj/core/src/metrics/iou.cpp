#include "cadseq/metrics/iou.hpp"

#include <algorithm>
#include <cmath>

#include "cadseq/errors.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::metrics {

Vec3 Rotation::apply(const Vec3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
          m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Vec3 Rotation::apply_transposed(const Vec3& v) const {
  return {m[0] * v.x + m[3] * v.y + m[6] * v.z,
          m[1] * v.x + m[4] * v.y + m[7] * v.z,
          m[2] * v.x + m[5] * v.y + m[8] * v.z};
}

const std::vector<Rotation>& octahedral_rotations() {
  static const std::vector<Rotation> rotations = [] {
    std::vector<Rotation> out;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& perm : perms) {
      for (int signs = 0; signs < 8; ++signs) {
        Rotation r;
        r.m.fill(0.0);
        double det_sign[3];
        for (int row = 0; row < 3; ++row) {
          const double s = (signs >> row) & 1 ? -1.0 : 1.0;
          r.m[row * 3 + perm[row]] = s;
          det_sign[row] = s;
        }
        // Determinant of a signed permutation: permutation parity times the
        // product of signs.
        int inversions = 0;
        for (int i = 0; i < 3; ++i) {
          for (int j = i + 1; j < 3; ++j) {
            if (perm[i] > perm[j]) ++inversions;
          }
        }
        const double det =
            (inversions % 2 == 0 ? 1.0 : -1.0) * det_sign[0] * det_sign[1] * det_sign[2];
        if (det > 0.0) out.push_back(r);
      }
    }
    return out;
  }();
  return rotations;
}

namespace {

struct NormalizedSolid {
  const geom::SolidModel* model;
  Vec3 center{0, 0, 0};
  double scale = 1.0;  // world units per normalized unit

  bool contains_normalized(const Vec3& q) const {
    return geom::contains(*model, center + q * scale);
  }
};

Vec3 mc_centroid(const geom::SolidModel& s, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Vec3 acc{0, 0, 0};
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 q{rng.uniform(s.bbox.lo.x, s.bbox.hi.x),
                 rng.uniform(s.bbox.lo.y, s.bbox.hi.y),
                 rng.uniform(s.bbox.lo.z, s.bbox.hi.z)};
    if (geom::contains(s, q)) {
      acc = acc + q;
      ++hits;
    }
  }
  if (hits == 0) throw EmptySolid("solid has no measurable volume");
  return acc * (1.0 / static_cast<double>(hits));
}

Box3 normalized_bbox(const geom::SolidModel& s, const NormalizedSolid& ns) {
  Box3 out;
  out.expand((s.bbox.lo - ns.center) * (1.0 / ns.scale));
  out.expand((s.bbox.hi - ns.center) * (1.0 / ns.scale));
  return out;
}

Box3 rotate_box(const Box3& box, const Rotation& r) {
  Box3 out;
  for (const double x : {box.lo.x, box.hi.x}) {
    for (const double y : {box.lo.y, box.hi.y}) {
      for (const double z : {box.lo.z, box.hi.z}) {
        out.expand(r.apply({x, y, z}));
      }
    }
  }
  return out;
}

}  // namespace

double iou_aligned(const geom::SolidModel& s1, const geom::SolidModel& s2,
                   std::size_t n, std::uint64_t seed, const IouOptions& options) {
  if (s1.bbox.empty() || s2.bbox.empty()) {
    throw EmptySolid("solid has an empty bounding box");
  }

  NormalizedSolid n1{&s1};
  NormalizedSolid n2{&s2};
  if (options.normalize) {
    const std::size_t probe = std::max<std::size_t>(n / 4, 10000);
    n1.center = mc_centroid(s1, probe, derive_seed(seed, {1}));
    n2.center = mc_centroid(s2, probe, derive_seed(seed, {2}));
    n1.scale = s1.bbox.diagonal();
    n2.scale = s2.bbox.diagonal();
    if (n1.scale <= 0.0 || n2.scale <= 0.0) {
      throw EmptySolid("solid bounding box has zero diagonal");
    }
  }

  const Box3 box1 = normalized_bbox(s1, n1);
  const Box3 box2 = normalized_bbox(s2, n2);

  std::vector<Rotation> rotations;
  if (options.align_search) {
    rotations = octahedral_rotations();
  } else {
    Rotation identity;
    identity.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    rotations.push_back(identity);
  }

  double best = 0.0;
  for (std::size_t ri = 0; ri < rotations.size(); ++ri) {
    const Rotation& rot = rotations[ri];
    Box3 joint = box1;
    const Box3 rotated = rotate_box(box2, rot);
    joint.expand(rotated.lo);
    joint.expand(rotated.hi);

    Rng rng(derive_seed(seed, {3, ri}));
    std::size_t both = 0;
    std::size_t either = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 q{rng.uniform(joint.lo.x, joint.hi.x),
                   rng.uniform(joint.lo.y, joint.hi.y),
                   rng.uniform(joint.lo.z, joint.hi.z)};
      const bool in1 = n1.contains_normalized(q);
      const bool in2 = n2.contains_normalized(rot.apply_transposed(q));
      if (in1 && in2) ++both;
      if (in1 || in2) ++either;
    }
    if (either == 0) continue;
    best = std::max(best, static_cast<double>(both) / static_cast<double>(either));
  }
  return best;
}

}  // namespace cadseq::metrics
