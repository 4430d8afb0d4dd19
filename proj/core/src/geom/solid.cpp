#include "cadseq/geom/solid.hpp"

#include <algorithm>
#include <cmath>

#include "cadseq/errors.hpp"
#include "cadseq/quantize.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::geom {

namespace {

Vec3 rodrigues(const Vec3& v, const Vec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

}  // namespace

PlaneFrame make_plane_frame(const Vec3& origin, double theta, double phi,
                            double gamma) {
  PlaneFrame f;
  f.origin = origin;
  const double st = std::sin(theta);
  f.normal = {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
  Vec3 ref = cross(Vec3{0.0, 0.0, 1.0}, f.normal);
  const double ref_len = norm(ref);
  if (ref_len < 1e-9) {
    ref = {1.0, 0.0, 0.0};
  } else {
    ref = ref * (1.0 / ref_len);
  }
  f.x_axis = normalized(rodrigues(ref, f.normal, gamma));
  f.y_axis = cross(f.normal, f.x_axis);
  return f;
}

bool ExtrudedSolid::contains(const Vec3& q) const {
  const Vec3 d = q - plane.origin;
  const double h = dot(d, plane.normal);
  if (h < h_lo - kBoundaryTol || h > h_hi + kBoundaryTol) return false;
  const Vec2 uv{dot(d, plane.x_axis) / scale, dot(d, plane.y_axis) / scale};
  if (point_in_profile(profile, uv)) return true;
  // Tie rule: within the boundary shell counts as inside.
  return profile_distance(profile, uv) * scale <= kBoundaryTol;
}

double ExtrudedSolid::margin(const Vec3& q) const {
  const Vec3 d = q - plane.origin;
  const double h = dot(d, plane.normal);
  const Vec2 uv{dot(d, plane.x_axis) / scale, dot(d, plane.y_axis) / scale};
  const double m2d = profile_signed_distance(profile, uv) * scale;
  return std::min({m2d, h - h_lo, h_hi - h});
}

SolidModel compile(const CadProgram& p) {
  if (const auto issue = check_grammar(p)) {
    throw GrammarError("command " + std::to_string(issue->command_index) + ": " +
                       issue->message);
  }

  SolidModel model;
  const auto groups = split_groups(p);
  for (const SketchExtrudeGroup& g : groups) {
    const Command& ext = p.commands[g.extrude];

    ExtrudedSolid solid;
    solid.profile = build_profile(p.commands, g.sketch_begin, g.sketch_end);

    const double theta = dequantize(ext.params[slot::kTheta], ParamKind::OrientAngle);
    const double phi = dequantize(ext.params[slot::kPhi], ParamKind::OrientAngle);
    const double gamma = dequantize(ext.params[slot::kGamma], ParamKind::OrientAngle);
    const Vec3 origin{dequantize(ext.params[slot::kPx], ParamKind::Coordinate),
                      dequantize(ext.params[slot::kPy], ParamKind::Coordinate),
                      dequantize(ext.params[slot::kPz], ParamKind::Coordinate)};
    solid.plane = make_plane_frame(origin, theta, phi, gamma);

    solid.scale = dequantize(ext.params[slot::kScale], ParamKind::Length);
    if (solid.scale < 1e-9) {
      throw CompileError(g.extrude, "degenerate profile scale");
    }

    const double e1 = dequantize(ext.params[slot::kE1], ParamKind::Coordinate);
    const double e2 = dequantize(ext.params[slot::kE2], ParamKind::Coordinate);
    switch (ext.extent()) {
      case ExtentType::OneSided:
        solid.h_hi = e1;
        solid.h_lo = 0.0;
        break;
      case ExtentType::Symmetric:
        solid.h_hi = e1 / 2.0;
        solid.h_lo = -e1 / 2.0;
        break;
      case ExtentType::TwoSided:
        solid.h_hi = e1;
        solid.h_lo = -e2;
        break;
    }
    if (solid.thickness() <= 1e-9) {
      throw CompileError(g.extrude, "zero-thickness extrusion");
    }

    const BoolOp op = ext.bool_op();
    if (model.solids.empty() && op != BoolOp::NewBody) {
      throw CompileError(g.extrude, "first extrusion must start a new body");
    }

    model.solids.push_back(std::move(solid));
    model.ops.push_back(op);
  }

  // Bbox over the union terms; Cut/Intersect entries only remove material.
  for (std::size_t i = 0; i < model.solids.size(); ++i) {
    if (model.ops[i] == BoolOp::Cut || model.ops[i] == BoolOp::Intersect) continue;
    const ExtrudedSolid& s = model.solids[i];
    const Box2 b2 = profile_bbox(s.profile);
    for (const double u : {b2.lo.x, b2.hi.x}) {
      for (const double v : {b2.lo.y, b2.hi.y}) {
        for (const double h : {s.h_lo, s.h_hi}) {
          model.bbox.expand(s.plane.to_world({u, v}, h, s.scale));
        }
      }
    }
  }
  return model;
}

bool contains(const SolidModel& s, const Vec3& q) {
  bool acc = false;
  for (std::size_t i = 0; i < s.solids.size(); ++i) {
    const bool m = s.solids[i].contains(q);
    switch (s.ops[i]) {
      case BoolOp::NewBody:
      case BoolOp::Join:
        acc = acc || m;
        break;
      case BoolOp::Cut:
        acc = acc && !m;
        break;
      case BoolOp::Intersect:
        acc = acc && m;
        break;
    }
  }
  return acc;
}

double solid_margin(const SolidModel& s, const Vec3& q) {
  double best = 1e300;
  for (const ExtrudedSolid& solid : s.solids) {
    best = std::min(best, std::abs(solid.margin(q)));
  }
  return best;
}

VolumeEstimate monte_carlo_volume(const SolidModel& s, std::size_t n,
                                  std::uint64_t seed) {
  if (s.bbox.empty() || n == 0) return {};
  const double box_volume = s.bbox.volume();
  if (box_volume <= 0.0) return {};
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 q{rng.uniform(s.bbox.lo.x, s.bbox.hi.x),
                 rng.uniform(s.bbox.lo.y, s.bbox.hi.y),
                 rng.uniform(s.bbox.lo.z, s.bbox.hi.z)};
    if (contains(s, q)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  VolumeEstimate est;
  est.volume = box_volume * p;
  est.std_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return est;
}

}  // namespace cadseq::geom
