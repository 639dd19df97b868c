#include "trajcomp/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "trajcomp/errors.hpp"

namespace trajcomp {

namespace {
constexpr double kPi = std::numbers::pi;

bool segments_cross(const Segment2& a, const Segment2& b) {
  auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
    return cross(q - p, r - p);
  };
  auto on_segment = [](const Point2& p, const Point2& q, const Point2& r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const double d1 = orient(b.start, b.end, a.start);
  const double d2 = orient(b.start, b.end, a.end);
  const double d3 = orient(a.start, a.end, b.start);
  const double d4 = orient(a.start, a.end, b.end);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(b.start, b.end, a.start)) return true;
  if (d2 == 0 && on_segment(b.start, b.end, a.end)) return true;
  if (d3 == 0 && on_segment(a.start, a.end, b.start)) return true;
  if (d4 == 0 && on_segment(a.start, a.end, b.end)) return true;
  return false;
}
}  // namespace

Point2 checked_point(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw PreconditionError("point coordinates must be finite");
  return {x, y};
}

double ped(const Point2& m, const Segment2& seg) {
  if (seg.degenerate())
    throw DegenerateGeometryError("PED is undefined for a zero-length segment");
  const Vec2 se = seg.end - seg.start;
  return std::abs(cross(m - seg.start, se)) / norm(se);
}

double psed(const Point2& m, const Segment2& seg) {
  if (seg.degenerate()) return distance(seg.start, m);
  const Vec2 se = seg.end - seg.start;
  if (dot(m - seg.start, se) >= 0.0 && dot(seg.end - m, se) >= 0.0)
    return std::abs(cross(m - seg.start, se)) / norm(se);
  return std::min(distance(seg.start, m), distance(m, seg.end));
}

bool segment_intersects_disc(const Segment2& seg, const EpsilonRegion& region) {
  return psed(region.center, seg) <= region.radius;
}

bool rect_contains(const Rect& r, const Point2& p) {
  return r.min_x <= p.x && p.x <= r.max_x && r.min_y <= p.y && p.y <= r.max_y;
}

bool rects_overlap(const Rect& a, const Rect& b) {
  return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y && b.min_y <= a.max_y;
}

bool rect_contains_rect(const Rect& outer, const Rect& inner) {
  return outer.min_x <= inner.min_x && inner.max_x <= outer.max_x &&
         outer.min_y <= inner.min_y && inner.max_y <= outer.max_y;
}

Rect bounding_rect(const Segment2& seg) {
  return {std::min(seg.start.x, seg.end.x), std::min(seg.start.y, seg.end.y),
          std::max(seg.start.x, seg.end.x), std::max(seg.start.y, seg.end.y)};
}

double point_rect_distance(const Point2& p, const Rect& r) {
  const double dx = std::max({r.min_x - p.x, 0.0, p.x - r.max_x});
  const double dy = std::max({r.min_y - p.y, 0.0, p.y - r.max_y});
  return std::hypot(dx, dy);
}

double segment_rect_distance(const Segment2& seg, const Rect& r) {
  if (rect_contains(r, seg.start) || rect_contains(r, seg.end)) return 0.0;
  const std::array<Point2, 4> corners{Point2{r.min_x, r.min_y}, Point2{r.max_x, r.min_y},
                                      Point2{r.max_x, r.max_y}, Point2{r.min_x, r.max_y}};
  if (!seg.degenerate()) {
    for (std::size_t k = 0; k < corners.size(); ++k) {
      if (segments_cross(seg, Segment2{corners[k], corners[(k + 1) % corners.size()]}))
        return 0.0;
    }
  }
  // Disjoint convex sets: the closest pair involves an endpoint of the segment
  // or a corner of the rectangle.
  double best = std::min(point_rect_distance(seg.start, r), point_rect_distance(seg.end, r));
  for (const auto& c : corners) best = std::min(best, psed(c, seg));
  return best;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

bool AngularInterval::contains(double direction) const {
  if (is_full()) return true;
  return std::abs(wrap_angle(direction - center)) <= half_width;
}

bool intersect(const AngularInterval& a, const AngularInterval& b, AngularInterval& out) {
  if (a.is_full()) {
    out = b;
    return true;
  }
  if (b.is_full()) {
    out = a;
    return true;
  }
  // Work in a frame centred on `a`. With both half-widths below pi/2 only the
  // nearest copy of `b` can overlap `a`, so the intersection is a single arc.
  const double offset = wrap_angle(b.center - a.center);
  const double lo = std::max(-a.half_width, offset - b.half_width);
  const double hi = std::min(a.half_width, offset + b.half_width);
  if (lo > hi) return false;
  out = {wrap_angle(a.center + (lo + hi) / 2.0), (hi - lo) / 2.0};
  return true;
}

AngularInterval wedge_of(const Point2& anchor, const Point2& target, double epsilon) {
  const Vec2 v = target - anchor;
  const double d = norm(v);
  if (!(d > epsilon))
    throw PreconditionError("wedge_of requires the anchor to lie outside the epsilon region");
  return {std::atan2(v.y, v.x), std::asin(epsilon / d)};
}

void CandidateRegion::update(const Point2& p, double epsilon) {
  if (empty_) throw PreconditionError("cannot update an empty candidate region");
  const AngularInterval w = wedge_of(anchor_, p, epsilon);
  min_radius_ = std::max(min_radius_, distance(anchor_, p));
  AngularInterval narrowed;
  if (intersect(wedge_, w, narrowed)) {
    wedge_ = narrowed;
  } else {
    empty_ = true;
  }
}

bool CandidateRegion::contains(const Point2& p) const {
  if (empty_) return false;
  const Vec2 v = p - anchor_;
  const double d = norm(v);
  if (min_radius_ > 0.0) {
    if (!(d > min_radius_)) return false;
  } else if (d == 0.0) {
    return true;
  }
  return wedge_.contains(std::atan2(v.y, v.x));
}

}  // namespace trajcomp
