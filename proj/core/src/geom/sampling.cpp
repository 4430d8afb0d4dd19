#include "cadseq/geom/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "cadseq/errors.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::geom {

namespace {

constexpr double kProbeEps = 1e-5;

enum class FaceKind { Wall, TopCap, BottomCap };

struct Face {
  FaceKind kind;
  std::size_t solid_index;
  std::size_t loop_index = 0;
  std::size_t curve_index = 0;
  double orient = 1.0;  // wall outward factor along the curve's right side
  double area = 0.0;
};

// Outward orientation factor for a wall: +1 when the outward side of the
// solid is to the right of the travel direction. Outer loops traversed ccw
// and holes traversed cw both give +1; the parity/area signs below cover the
// remaining traversal combinations.
double wall_orientation(const Profile& pr, std::size_t loop_index) {
  const Loop& loop = pr.loops[loop_index];
  const double area_sign = loop_signed_area(loop) >= 0.0 ? 1.0 : -1.0;
  const Vec2 rep = curve_point(loop.curves[0], 0.37);
  int depth = 0;
  for (std::size_t j = 0; j < pr.loops.size(); ++j) {
    if (j == loop_index) continue;
    Profile other;
    other.loops.push_back(pr.loops[j]);
    if (point_in_profile(other, rep)) ++depth;
  }
  const double parity_sign = (depth % 2 == 0) ? 1.0 : -1.0;
  return area_sign * parity_sign;
}

// In-plane outward unit normal of a wall at parameter t.
Vec2 wall_normal_2d(const Curve& c, double t, double orient) {
  if (const auto* l = std::get_if<LineSeg>(&c)) {
    const Vec2 dir = l->b - l->a;
    const double len = norm(dir);
    (void)t;
    return rot90cw({dir.x / len, dir.y / len}) * orient;
  }
  if (const auto* a = std::get_if<ArcSeg>(&c)) {
    const Vec2 p = a->point_at(t);
    const Vec2 radial{(p.x - a->center.x) / a->radius, (p.y - a->center.y) / a->radius};
    // rot90cw(tangent) is +radial for ccw travel, -radial for cw.
    return radial * (a->ccw ? orient : -orient);
  }
  const CircleSeg& circle = std::get<CircleSeg>(c);
  const Vec2 p = circle.point_at(t);
  const Vec2 radial{(p.x - circle.center.x) / circle.radius,
                    (p.y - circle.center.y) / circle.radius};
  return radial * orient;  // circle parameterization is ccw
}

}  // namespace

PointCloud sample_surface(const SolidModel& s, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw SamplingError("requested zero points");
  if (s.solids.empty()) throw SamplingError("empty solid model");

  std::vector<Face> faces;
  std::vector<Box2> cap_boxes(s.solids.size());
  for (std::size_t si = 0; si < s.solids.size(); ++si) {
    const ExtrudedSolid& solid = s.solids[si];
    const double thickness = solid.thickness();
    for (std::size_t li = 0; li < solid.profile.loops.size(); ++li) {
      const double orient = wall_orientation(solid.profile, li);
      const Loop& loop = solid.profile.loops[li];
      for (std::size_t ci = 0; ci < loop.curves.size(); ++ci) {
        Face f;
        f.kind = FaceKind::Wall;
        f.solid_index = si;
        f.loop_index = li;
        f.curve_index = ci;
        f.orient = orient;
        f.area = solid.scale * curve_length(loop.curves[ci]) * thickness;
        if (f.area > 0.0) faces.push_back(f);
      }
    }
    const double cap_area =
        solid.scale * solid.scale * profile_area(solid.profile);
    cap_boxes[si] = profile_bbox(solid.profile);
    if (cap_area > 0.0) {
      faces.push_back({FaceKind::TopCap, si, 0, 0, 1.0, cap_area});
      faces.push_back({FaceKind::BottomCap, si, 0, 0, 1.0, cap_area});
    }
  }
  if (faces.empty()) throw SamplingError("solid has no boundary area");

  std::vector<double> cumulative(faces.size());
  double total = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    total += faces[i].area;
    cumulative[i] = total;
  }

  Rng rng(seed);
  PointCloud cloud;
  cloud.seed = seed;
  cloud.points.reserve(n);
  cloud.normals.reserve(n);

  const std::size_t budget = n * static_cast<std::size_t>(kSampleRetryFactor);
  for (std::size_t attempt = 0; attempt < budget && cloud.points.size() < n;
       ++attempt) {
    const double pick = rng.uniform() * total;
    const std::size_t fi =
        std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
        cumulative.begin();
    const Face& face = faces[std::min(fi, faces.size() - 1)];
    const ExtrudedSolid& solid = s.solids[face.solid_index];

    Vec3 point;
    Vec3 normal;
    if (face.kind == FaceKind::Wall) {
      const Curve& curve =
          solid.profile.loops[face.loop_index].curves[face.curve_index];
      const double t = rng.uniform();
      const double h = rng.uniform(solid.h_lo, solid.h_hi);
      const Vec2 uv = curve_point(curve, t);
      const Vec2 n2 = wall_normal_2d(curve, t, face.orient);
      point = solid.plane.to_world(uv, h, solid.scale);
      normal = solid.plane.x_axis * n2.x + solid.plane.y_axis * n2.y;
    } else {
      const Box2& box = cap_boxes[face.solid_index];
      bool found = false;
      Vec2 uv;
      for (int tries = 0; tries < 64; ++tries) {
        uv = {rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
        if (point_in_profile(solid.profile, uv)) {
          found = true;
          break;
        }
      }
      if (!found) continue;
      const bool top = face.kind == FaceKind::TopCap;
      point = solid.plane.to_world(uv, top ? solid.h_hi : solid.h_lo, solid.scale);
      normal = top ? solid.plane.normal : solid.plane.normal * -1.0;
    }

    const bool inside_behind = contains(s, point - normal * kProbeEps);
    const bool inside_ahead = contains(s, point + normal * kProbeEps);
    if (inside_behind && !inside_ahead) {
      cloud.points.push_back(point);
      cloud.normals.push_back(normal);
    } else if (!inside_behind && inside_ahead) {
      // Face exposed by a Cut: the result lies on the other side.
      cloud.points.push_back(point);
      cloud.normals.push_back(normal * -1.0);
    }
  }

  if (cloud.points.size() < n) {
    throw SamplingError("surface sampling found " +
                        std::to_string(cloud.points.size()) + " of " +
                        std::to_string(n) + " points within the retry budget");
  }
  return cloud;
}

}  // namespace cadseq::geom
