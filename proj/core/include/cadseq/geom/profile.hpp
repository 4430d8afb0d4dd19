#pragma once

#include <variant>
#include <vector>

#include "cadseq/command.hpp"
#include "cadseq/vec.hpp"

namespace cadseq::geom {

struct LineSeg {
  Vec2 a;
  Vec2 b;
};

// Circular arc from `start` to `end`, sweeping `sweep` radians about `center`
// counterclockwise when ccw, clockwise otherwise.
struct ArcSeg {
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;  // angle of the start point
  double sweep = 0.0;        // in (0, 2pi)
  bool ccw = true;
  Vec2 start;
  Vec2 end;

  double end_angle() const { return start_angle + (ccw ? sweep : -sweep); }
  Vec2 point_at(double t) const;  // t in [0, 1] along the arc
  // True if the given angle (radians) lies within the swept span.
  bool contains_angle(double angle) const;
};

struct CircleSeg {
  Vec2 center;
  double radius = 0.0;

  Vec2 point_at(double t) const;  // t in [0, 1), counterclockwise from +x
};

using Curve = std::variant<LineSeg, ArcSeg, CircleSeg>;

double curve_length(const Curve& c);
Vec2 curve_point(const Curve& c, double t);
Vec2 curve_start(const Curve& c);
Vec2 curve_end(const Curve& c);

struct Loop {
  std::vector<Curve> curves;
  bool is_circle() const {
    return curves.size() == 1 && std::holds_alternative<CircleSeg>(curves[0]);
  }
};

struct Box2 {
  Vec2 lo{1e300, 1e300};
  Vec2 hi{-1e300, -1e300};
  void expand(const Vec2& p);
  bool empty() const { return lo.x > hi.x; }
};

// A planar region bounded by one or more closed loops, interpreted with
// even-odd parity. Coordinates are dequantized sketch-local units; every
// Line/Arc loop passes through the sketch origin (its start point).
struct Profile {
  std::vector<Loop> loops;
};

inline constexpr double kLoopCloseTol = 1e-6;

// Builds the profile for one sketch (the command range [begin, end) of a
// sketch/extrude group). Dequantizes coordinates, chains each loop's curves
// from the sketch origin, and checks closure within kLoopCloseTol. Throws
// CompileError (with the offending absolute command index, offset by `base`)
// for open loops and degenerate curves.
Profile build_profile(const std::vector<Command>& commands, std::size_t begin,
                      std::size_t end, std::size_t base_index_offset = 0);

// Even-odd point classification by horizontal ray casting; arcs are
// intersected analytically. Exact-boundary points are not guaranteed a side;
// callers needing the tolerance shell combine with profile_distance.
bool point_in_profile(const Profile& pr, const Vec2& q);

// Unsigned distance from q to the nearest boundary curve.
double profile_distance(const Profile& pr, const Vec2& q);

// Positive inside, negative outside (even-odd sign, boundary distance
// magnitude).
double profile_signed_distance(const Profile& pr, const Vec2& q);

Box2 profile_bbox(const Profile& pr);

// Region area under even-odd parity: sum over loops of |signed loop area|
// weighted by nesting parity (holes subtract, islands inside holes add).
// Exact for profiles whose loops are simple and pairwise disjoint.
double profile_area(const Profile& pr);

// Signed area of a single closed loop (Green's theorem; arcs integrated
// analytically). Positive when traversed counterclockwise.
double loop_signed_area(const Loop& loop);

}  // namespace cadseq::geom
