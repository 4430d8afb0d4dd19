#pragma once

#include <vector>

#include "cadseq/command.hpp"
#include "cadseq/geom/profile.hpp"
#include "cadseq/pointcloud.hpp"
#include "cadseq/vec.hpp"

namespace cadseq::geom {

// Boundary classification tolerance in normalized world units. Points within
// this shell of a primitive's boundary classify as inside (deterministic tie
// rule).
inline constexpr double kBoundaryTol = 1e-9;

// Orthonormal sketch-plane frame derived from (theta, phi, gamma).
struct PlaneFrame {
  Vec3 origin;
  Vec3 x_axis;
  Vec3 y_axis;
  Vec3 normal;

  Vec3 to_world(const Vec2& uv, double h, double scale) const {
    return origin + x_axis * (uv.x * scale) + y_axis * (uv.y * scale) + normal * h;
  }
};

// Builds the frame: normal from spherical angles (theta from +z, phi azimuth),
// reference x-axis = normalize(z x normal) (falling back to +x when the
// normal is axial), rotated about the normal by gamma.
PlaneFrame make_plane_frame(const Vec3& origin, double theta, double phi, double gamma);

// One extruded profile: the sketch region swept along the plane normal over
// heights [h_lo, h_hi], with in-plane scale applied to the profile.
struct ExtrudedSolid {
  Profile profile;
  PlaneFrame plane;
  double scale = 1.0;
  double h_lo = 0.0;
  double h_hi = 0.0;

  double thickness() const { return h_hi - h_lo; }
  // Membership with the kBoundaryTol tie rule.
  bool contains(const Vec3& q) const;
  // Signed robustness margin: positive inside, negative outside; |margin| is
  // a lower bound on the distance to this primitive's boundary.
  double margin(const Vec3& q) const;
};

// A compiled program: extrusions combined left to right by boolean ops.
// The first entry is NewBody; any later NewBody contributes as a union (a
// separate body of the same part).
struct SolidModel {
  std::vector<ExtrudedSolid> solids;
  std::vector<BoolOp> ops;
  Box3 bbox;

  std::size_t size() const { return solids.size(); }
};

// Compiles a well-formed program: dequantizes parameters, builds profiles
// (checking loop closure), resolves extent types into (h_lo, h_hi), and
// computes the bounding box. Throws GrammarError for structural violations
// and CompileError (with the failing command index) for geometric ones.
SolidModel compile(const CadProgram& p);

// CSG membership, evaluated left to right.
bool contains(const SolidModel& s, const Vec3& q);

// min over primitives of |per-primitive margin|: a point with
// solid_margin > eps keeps its classification under any perturbation < eps.
double solid_margin(const SolidModel& s, const Vec3& q);

struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
};

// Monte Carlo volume over the model bbox.
VolumeEstimate monte_carlo_volume(const SolidModel& s, std::size_t n,
                                  std::uint64_t seed);

}  // namespace cadseq::geom
