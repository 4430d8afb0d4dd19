#include "cadseq/geom/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cadseq::geom {

namespace {

constexpr double kTol = 1e-9;
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Angular span of an arc normalized to ccw orientation: [begin, begin+extent].
struct AngularSpan {
  double begin;
  double extent;
};

AngularSpan arc_span(const ArcSeg& a) {
  if (a.ccw) return {wrap_angle(a.start_angle), a.sweep};
  return {wrap_angle(a.start_angle - a.sweep), a.sweep};
}

bool span_contains(const AngularSpan& s, double angle, double tol_angle) {
  const double off = wrap_angle(angle - s.begin);
  return off <= s.extent + tol_angle || off >= kTwoPi - tol_angle;
}

// Length of the overlap of two ccw angular spans.
double span_overlap(const AngularSpan& a, const AngularSpan& b) {
  // Shift b relative to a's begin and clip; a circular interval can wrap, so
  // test both placements of b's begin.
  double overlap = 0.0;
  for (const double shift : {0.0, kTwoPi}) {
    const double b0 = wrap_angle(b.begin - a.begin) - shift;
    const double lo = std::max(0.0, b0);
    const double hi = std::min(a.extent, b0 + b.extent);
    overlap = std::max(overlap, hi - lo);
  }
  return overlap;
}

struct CurveRef {
  const Curve* curve;
  std::size_t loop;
  std::size_t pos;
  std::size_t loop_size;
};

bool adjacent(const CurveRef& a, const CurveRef& b) {
  if (a.loop != b.loop) return false;
  const std::size_t n = a.loop_size;
  if (n < 2) return false;
  const std::size_t d = (b.pos + n - a.pos) % n;
  return d == 1 || d == n - 1;
}

// Intersection points of two curves; `overlap` is set when the curves share a
// positive-length stretch (collinear segments, cocircular arcs).
struct Meeting {
  std::vector<Vec2> points;
  bool overlap = false;
};

void line_line(const LineSeg& p, const LineSeg& q, Meeting* m) {
  const Vec2 r = p.b - p.a;
  const Vec2 s = q.b - q.a;
  const double denom = cross(r, s);
  const Vec2 pq = q.a - p.a;
  const double scale = std::max({norm(r), norm(s), 1e-12});
  if (std::abs(denom) < kTol * scale) {
    // Parallel. Collinear if q.a sits on p's line.
    if (std::abs(cross(pq, r)) > kTol * scale) return;
    const double rr = norm_sq(r);
    double t0 = dot(q.a - p.a, r) / rr;
    double t1 = dot(q.b - p.a, r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(0.0, t0);
    const double hi = std::min(1.0, t1);
    if ((hi - lo) * norm(r) > kTol) {
      m->overlap = true;
    } else if (hi - lo > -kTol / norm(r)) {
      const double t = (lo + hi) / 2.0;
      m->points.push_back({p.a.x + r.x * t, p.a.y + r.y * t});
    }
    return;
  }
  const double t = cross(pq, s) / denom;
  const double u = cross(pq, r) / denom;
  const double tol_t = kTol / std::max(norm(r), 1e-12);
  const double tol_u = kTol / std::max(norm(s), 1e-12);
  if (t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u) return;
  m->points.push_back({p.a.x + r.x * t, p.a.y + r.y * t});
}

// Intersections of the full circle (c, r) with segment p; appends points
// whose segment parameter lies in [0, 1].
void circle_segment_points(const Vec2& c, double r, const LineSeg& p,
                           std::vector<Vec2>* out) {
  const Vec2 d = p.b - p.a;
  const Vec2 f = p.a - c;
  const double a = norm_sq(d);
  if (a < 1e-24) return;
  const double b = 2.0 * dot(f, d);
  const double cc = norm_sq(f) - r * r;
  double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) {
    // Graze within tolerance counts as touching.
    if (disc > -4.0 * a * kTol * (2.0 * r + kTol)) disc = 0.0;
    else return;
  }
  const double sq = std::sqrt(std::max(disc, 0.0));
  const double tol_t = kTol / std::sqrt(a);
  for (const double sign : {-1.0, 1.0}) {
    const double t = (-b + sign * sq) / (2.0 * a);
    if (t < -tol_t || t > 1.0 + tol_t) continue;
    out->push_back({p.a.x + d.x * t, p.a.y + d.y * t});
    if (sq == 0.0) break;  // tangent: one point
  }
}

void circle_circle_points(const Vec2& c1, double r1, const Vec2& c2, double r2,
                          Meeting* m, bool* cocircular) {
  const double d = norm(c2 - c1);
  *cocircular = false;
  if (d < kTol && std::abs(r1 - r2) < kTol) {
    *cocircular = true;
    return;
  }
  if (d < 1e-15) return;  // concentric, different radii
  if (d > r1 + r2 + kTol) return;
  if (d < std::abs(r1 - r2) - kTol) return;
  double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  double h_sq = r1 * r1 - a * a;
  if (h_sq < 0.0) h_sq = 0.0;
  const double h = std::sqrt(h_sq);
  const Vec2 u{(c2.x - c1.x) / d, (c2.y - c1.y) / d};
  const Vec2 mid{c1.x + u.x * a, c1.y + u.y * a};
  m->points.push_back({mid.x - u.y * h, mid.y + u.x * h});
  if (h > kTol) {
    m->points.push_back({mid.x + u.y * h, mid.y - u.x * h});
  }
}

struct CircleLike {
  Vec2 center;
  double radius;
  bool full;
  AngularSpan span;  // valid when !full
};

CircleLike as_circle_like(const Curve& c) {
  if (const auto* a = std::get_if<ArcSeg>(&c)) {
    return {a->center, a->radius, false, arc_span(*a)};
  }
  const CircleSeg& circle = std::get<CircleSeg>(c);
  return {circle.center, circle.radius, true, {}};
}

bool on_span(const CircleLike& cl, const Vec2& p, double tol_angle) {
  if (cl.full) return true;
  const double angle = std::atan2(p.y - cl.center.y, p.x - cl.center.x);
  return span_contains(cl.span, angle, tol_angle);
}

Meeting intersect_curves(const Curve& a, const Curve& b) {
  Meeting m;
  const auto* la = std::get_if<LineSeg>(&a);
  const auto* lb = std::get_if<LineSeg>(&b);
  if (la && lb) {
    line_line(*la, *lb, &m);
    return m;
  }
  if (la || lb) {
    const LineSeg& seg = la ? *la : *lb;
    const CircleLike cl = as_circle_like(la ? b : a);
    std::vector<Vec2> pts;
    circle_segment_points(cl.center, cl.radius, seg, &pts);
    const double tol_angle = kTol / std::max(cl.radius, kTol);
    for (const Vec2& p : pts) {
      if (on_span(cl, p, tol_angle)) m.points.push_back(p);
    }
    return m;
  }
  const CircleLike ca = as_circle_like(a);
  const CircleLike cb = as_circle_like(b);
  bool cocircular = false;
  Meeting raw;
  circle_circle_points(ca.center, ca.radius, cb.center, cb.radius, &raw, &cocircular);
  if (cocircular) {
    if (ca.full || cb.full) {
      // A full circle and a cocircular arc (or second circle) always share
      // a positive-length stretch.
      m.overlap = true;
      return m;
    }
    const double overlap_angle = span_overlap(ca.span, cb.span);
    const double tol_angle = kTol / std::max(ca.radius, kTol);
    if (overlap_angle > tol_angle) {
      m.overlap = true;
    }
    return m;
  }
  const double tol_a = kTol / std::max(ca.radius, kTol);
  const double tol_b = kTol / std::max(cb.radius, kTol);
  for (const Vec2& p : raw.points) {
    if (on_span(ca, p, tol_a) && on_span(cb, p, tol_b)) m.points.push_back(p);
  }
  return m;
}

}  // namespace

bool check_self_intersection(const Profile& pr) {
  std::vector<CurveRef> refs;
  for (std::size_t li = 0; li < pr.loops.size(); ++li) {
    const Loop& loop = pr.loops[li];
    for (std::size_t ci = 0; ci < loop.curves.size(); ++ci) {
      refs.push_back({&loop.curves[ci], li, ci, loop.curves.size()});
    }
  }

  for (std::size_t i = 0; i < refs.size(); ++i) {
    for (std::size_t j = i + 1; j < refs.size(); ++j) {
      const Meeting m = intersect_curves(*refs[i].curve, *refs[j].curve);
      if (!adjacent(refs[i], refs[j])) {
        if (m.overlap || !m.points.empty()) return true;
        continue;
      }
      if (m.overlap) return true;  // overlap beyond the shared endpoint
      // Shared endpoints are legitimate meetings for neighbors in a chain.
      std::vector<Vec2> shared;
      for (const Vec2& pa : {curve_start(*refs[i].curve), curve_end(*refs[i].curve)}) {
        for (const Vec2& pb : {curve_start(*refs[j].curve), curve_end(*refs[j].curve)}) {
          if (norm(pa - pb) < 10.0 * kTol) shared.push_back(pa);
        }
      }
      for (const Vec2& p : m.points) {
        bool at_shared = false;
        for (const Vec2& s : shared) {
          if (norm(p - s) < 1e-6) {
            at_shared = true;
            break;
          }
        }
        if (!at_shared) return true;
      }
    }
  }
  return false;
}

}  // namespace cadseq::geom
