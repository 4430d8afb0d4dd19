#include "cadseq/geom/profile.hpp"

#include <algorithm>
#include <cmath>

#include "cadseq/errors.hpp"
#include "cadseq/quantize.hpp"

namespace cadseq::geom {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDegenerateTol = 1e-9;

double wrap_angle(double a) {
  // Into [0, 2pi).
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

Vec2 ArcSeg::point_at(double t) const {
  const double a = start_angle + (ccw ? sweep : -sweep) * t;
  return {center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
}

bool ArcSeg::contains_angle(double angle) const {
  // Measure the ccw offset from the start angle and compare against the span.
  const double from_start = wrap_angle(ccw ? angle - start_angle : start_angle - angle);
  return from_start <= sweep + 1e-12;
}

Vec2 CircleSeg::point_at(double t) const {
  const double a = kTwoPi * t;
  return {center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
}

double curve_length(const Curve& c) {
  if (const auto* l = std::get_if<LineSeg>(&c)) return norm(l->b - l->a);
  if (const auto* a = std::get_if<ArcSeg>(&c)) return a->radius * a->sweep;
  return kTwoPi * std::get<CircleSeg>(c).radius;
}

Vec2 curve_point(const Curve& c, double t) {
  if (const auto* l = std::get_if<LineSeg>(&c)) {
    return {l->a.x + (l->b.x - l->a.x) * t, l->a.y + (l->b.y - l->a.y) * t};
  }
  if (const auto* a = std::get_if<ArcSeg>(&c)) return a->point_at(t);
  return std::get<CircleSeg>(c).point_at(t);
}

Vec2 curve_start(const Curve& c) {
  if (const auto* l = std::get_if<LineSeg>(&c)) return l->a;
  if (const auto* a = std::get_if<ArcSeg>(&c)) return a->start;
  return std::get<CircleSeg>(c).point_at(0.0);
}

Vec2 curve_end(const Curve& c) {
  if (const auto* l = std::get_if<LineSeg>(&c)) return l->b;
  if (const auto* a = std::get_if<ArcSeg>(&c)) return a->end;
  return std::get<CircleSeg>(c).point_at(0.0);
}

void Box2::expand(const Vec2& p) {
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
}

namespace {

// Builds the arc through `from` -> `to` with the given sweep and direction.
// The center sits on the perpendicular bisector of the chord at signed
// distance r*cos(sweep/2); the sign of cos handles sweeps past pi.
ArcSeg make_arc(const Vec2& from, const Vec2& to, double sweep, bool ccw,
                std::size_t cmd_index) {
  const Vec2 chord = to - from;
  const double chord_len = norm(chord);
  const double half_sin = std::sin(sweep / 2.0);
  if (sweep < kDegenerateTol || chord_len < kDegenerateTol || half_sin < 1e-12) {
    throw CompileError(cmd_index, "degenerate arc");
  }
  ArcSeg arc;
  arc.radius = chord_len / (2.0 * half_sin);
  arc.sweep = sweep;
  arc.ccw = ccw;
  arc.start = from;
  arc.end = to;
  const Vec2 mid{(from.x + to.x) / 2.0, (from.y + to.y) / 2.0};
  const Vec2 dir{chord.x / chord_len, chord.y / chord_len};
  const Vec2 perp = ccw ? rot90ccw(dir) : rot90cw(dir);
  const double h = arc.radius * std::cos(sweep / 2.0);
  arc.center = {mid.x + perp.x * h, mid.y + perp.y * h};
  arc.start_angle = std::atan2(from.y - arc.center.y, from.x - arc.center.x);
  return arc;
}

}  // namespace

Profile build_profile(const std::vector<Command>& commands, std::size_t begin,
                      std::size_t end, std::size_t base_index_offset) {
  Profile pr;
  Loop current;
  bool in_loop = false;
  Vec2 pen{0.0, 0.0};
  std::size_t last_curve_index = begin;

  auto close_loop = [&](std::size_t at) {
    if (!in_loop) return;
    if (!current.is_circle()) {
      if (norm(pen) > kLoopCloseTol) {
        throw CompileError(base_index_offset + last_curve_index,
                           "loop does not close");
      }
    }
    pr.loops.push_back(std::move(current));
    current = Loop{};
    (void)at;
  };

  for (std::size_t i = begin; i < end; ++i) {
    const Command& c = commands[i];
    switch (c.type) {
      case CommandType::Sol:
        close_loop(i);
        in_loop = true;
        pen = {0.0, 0.0};  // every chained loop starts at the sketch origin
        break;
      case CommandType::Line: {
        const Vec2 to{dequantize(c.params[slot::kX], ParamKind::Coordinate),
                      dequantize(c.params[slot::kY], ParamKind::Coordinate)};
        if (norm(to - pen) < kDegenerateTol) {
          throw CompileError(base_index_offset + i, "zero-length line segment");
        }
        current.curves.push_back(LineSeg{pen, to});
        pen = to;
        last_curve_index = i;
        break;
      }
      case CommandType::Arc: {
        const Vec2 to{dequantize(c.params[slot::kX], ParamKind::Coordinate),
                      dequantize(c.params[slot::kY], ParamKind::Coordinate)};
        const double sweep =
            dequantize(c.params[slot::kSweep], ParamKind::SweepAngle);
        const bool ccw = c.params[slot::kCcw] != 0;
        current.curves.push_back(make_arc(pen, to, sweep, ccw, base_index_offset + i));
        pen = to;
        last_curve_index = i;
        break;
      }
      case CommandType::Circle: {
        const double r = dequantize(c.params[slot::kRadius], ParamKind::Length);
        if (r < kDegenerateTol) {
          throw CompileError(base_index_offset + i, "zero-radius circle");
        }
        CircleSeg circle;
        circle.center = {dequantize(c.params[slot::kX], ParamKind::Coordinate),
                         dequantize(c.params[slot::kY], ParamKind::Coordinate)};
        circle.radius = r;
        current.curves.push_back(circle);
        last_curve_index = i;
        break;
      }
      case CommandType::Extrude:
      case CommandType::Eos:
        throw CompileError(base_index_offset + i, "non-sketch command in sketch range");
    }
  }
  close_loop(end);
  if (pr.loops.empty()) {
    throw CompileError(base_index_offset + begin, "sketch has no loops");
  }
  return pr;
}

namespace {

// Counts crossings of the rightward horizontal ray from q with a curve.
int ray_crossings_line(const LineSeg& l, const Vec2& q) {
  const Vec2& a = l.a;
  const Vec2& b = l.b;
  // Half-open interval rule avoids double counting at shared vertices.
  const bool a_above = a.y > q.y;
  const bool b_above = b.y > q.y;
  if (a_above == b_above) return 0;
  const double t = (q.y - a.y) / (b.y - a.y);
  const double x = a.x + t * (b.x - a.x);
  return x > q.x ? 1 : 0;
}

int ray_crossings_circle_like(const Vec2& center, double radius, const Vec2& q,
                              const ArcSeg* span) {
  const double dy = q.y - center.y;
  const double disc = radius * radius - dy * dy;
  if (disc <= 0.0) return 0;  // tangent rays count as no crossing
  const double sq = std::sqrt(disc);
  int crossings = 0;
  for (const double sign : {-1.0, 1.0}) {
    const double x = center.x + sign * sq;
    if (x <= q.x) continue;
    if (span != nullptr) {
      const double angle = std::atan2(dy, sign * sq);
      if (!span->contains_angle(angle)) continue;
      // Apply the same half-open rule as segments: count the intersection
      // only if the curve actually crosses the ray's height there, and skip
      // endpoint grazes on the closing side.
      const Vec2 p{x, q.y};
      const double end_tol = 1e-12;
      if (norm(p - span->start) < end_tol || norm(p - span->end) < end_tol) {
        // Endpoint exactly on the ray: resolved by the chained neighbor via
        // the half-open rule on its own test; count if the arc goes above.
        const double mid_angle = angle + (span->ccw ? 1e-7 : -1e-7);
        const double ny = span->center.y + span->radius * std::sin(mid_angle);
        if (ny <= q.y) continue;
      }
    }
    ++crossings;
  }
  return crossings;
}

double dist_point_segment(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len_sq = norm_sq(ab);
  double t = len_sq > 0.0 ? dot(q - a, ab) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 proj{a.x + ab.x * t, a.y + ab.y * t};
  return norm(q - proj);
}

double dist_point_arc(const Vec2& q, const ArcSeg& arc) {
  const double d_center = norm(q - arc.center);
  const double angle = std::atan2(q.y - arc.center.y, q.x - arc.center.x);
  if (arc.contains_angle(angle)) {
    return std::abs(d_center - arc.radius);
  }
  return std::min(norm(q - arc.start), norm(q - arc.end));
}

double dist_point_curve(const Vec2& q, const Curve& c) {
  if (const auto* l = std::get_if<LineSeg>(&c)) return dist_point_segment(q, l->a, l->b);
  if (const auto* a = std::get_if<ArcSeg>(&c)) return dist_point_arc(q, *a);
  const CircleSeg& circle = std::get<CircleSeg>(c);
  return std::abs(norm(q - circle.center) - circle.radius);
}

}  // namespace

bool point_in_profile(const Profile& pr, const Vec2& q) {
  int crossings = 0;
  for (const Loop& loop : pr.loops) {
    for (const Curve& c : loop.curves) {
      if (const auto* l = std::get_if<LineSeg>(&c)) {
        crossings += ray_crossings_line(*l, q);
      } else if (const auto* a = std::get_if<ArcSeg>(&c)) {
        crossings += ray_crossings_circle_like(a->center, a->radius, q, a);
      } else {
        const CircleSeg& circle = std::get<CircleSeg>(c);
        crossings += ray_crossings_circle_like(circle.center, circle.radius, q, nullptr);
      }
    }
  }
  return (crossings % 2) == 1;
}

double profile_distance(const Profile& pr, const Vec2& q) {
  double best = 1e300;
  for (const Loop& loop : pr.loops) {
    for (const Curve& c : loop.curves) {
      best = std::min(best, dist_point_curve(q, c));
    }
  }
  return best;
}

double profile_signed_distance(const Profile& pr, const Vec2& q) {
  const double d = profile_distance(pr, q);
  return point_in_profile(pr, q) ? d : -d;
}

Box2 profile_bbox(const Profile& pr) {
  Box2 box;
  for (const Loop& loop : pr.loops) {
    for (const Curve& c : loop.curves) {
      if (const auto* l = std::get_if<LineSeg>(&c)) {
        box.expand(l->a);
        box.expand(l->b);
      } else if (const auto* a = std::get_if<ArcSeg>(&c)) {
        box.expand(a->start);
        box.expand(a->end);
        // Axis extremes of the circle that fall inside the swept span.
        for (const double angle : {0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0}) {
          if (a->contains_angle(angle)) {
            box.expand({a->center.x + a->radius * std::cos(angle),
                        a->center.y + a->radius * std::sin(angle)});
          }
        }
      } else {
        const CircleSeg& circle = std::get<CircleSeg>(c);
        box.expand({circle.center.x - circle.radius, circle.center.y - circle.radius});
        box.expand({circle.center.x + circle.radius, circle.center.y + circle.radius});
      }
    }
  }
  return box;
}

double loop_signed_area(const Loop& loop) {
  // 1/2 * contour integral of (x dy - y dx).
  double acc = 0.0;
  for (const Curve& c : loop.curves) {
    if (const auto* l = std::get_if<LineSeg>(&c)) {
      acc += cross(l->a, l->b);
    } else if (const auto* a = std::get_if<ArcSeg>(&c)) {
      const double delta = a->ccw ? a->sweep : -a->sweep;
      const double a0 = a->start_angle;
      const double a1 = a->end_angle();
      acc += a->radius * a->radius * delta +
             a->center.x * a->radius * (std::sin(a1) - std::sin(a0)) -
             a->center.y * a->radius * (std::cos(a1) - std::cos(a0));
    } else {
      const CircleSeg& circle = std::get<CircleSeg>(c);
      acc += kTwoPi * circle.radius * circle.radius;
    }
  }
  return acc / 2.0;
}

double profile_area(const Profile& pr) {
  double total = 0.0;
  for (std::size_t i = 0; i < pr.loops.size(); ++i) {
    const double area = std::abs(loop_signed_area(pr.loops[i]));
    // Nesting depth by even-odd membership of a representative point in the
    // other loops.
    const Vec2 rep = curve_point(pr.loops[i].curves[0], 0.37);
    int depth = 0;
    for (std::size_t j = 0; j < pr.loops.size(); ++j) {
      if (j == i) continue;
      Profile other;
      other.loops.push_back(pr.loops[j]);
      if (point_in_profile(other, rep)) ++depth;
    }
    total += (depth % 2 == 0) ? area : -area;
  }
  return std::max(total, 0.0);
}

}  // namespace cadseq::geom
