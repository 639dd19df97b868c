#pragma once

#include <cmath>
#include <numbers>

namespace trajcomp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(b - a); }

struct Segment2 {
  Point2 start;
  Point2 end;

  bool degenerate() const { return start == end; }
  double length() const { return distance(start, end); }
};

/// Disc of radius epsilon around a raw point.
struct EpsilonRegion {
  Point2 center;
  double radius = 0.0;
};

/// Closed axis-aligned rectangle.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool valid() const { return min_x <= max_x && min_y <= max_y; }
  Rect expanded(double margin) const {
    return {min_x - margin, min_y - margin, max_x + margin, max_y + margin};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Throws PreconditionError unless both coordinates are finite.
Point2 checked_point(double x, double y);

/// Perpendicular distance from `m` to the infinite line through `seg`.
/// Throws DegenerateGeometryError for a zero-length segment.
double ped(const Point2& m, const Segment2& seg);

/// Point-to-segment Euclidean distance. Falls back to the nearer endpoint
/// when the perpendicular foot is off the segment.
double psed(const Point2& m, const Segment2& seg);

/// True iff the segment touches the closed disc; equivalent to psed <= radius.
bool segment_intersects_disc(const Segment2& seg, const EpsilonRegion& region);

bool rect_contains(const Rect& r, const Point2& p);
bool rects_overlap(const Rect& a, const Rect& b);
/// True iff `inner` lies entirely inside `outer` (closed).
bool rect_contains_rect(const Rect& outer, const Rect& inner);
Rect bounding_rect(const Segment2& seg);
/// Euclidean distance from a point to a closed rectangle, 0 inside.
double point_rect_distance(const Point2& p, const Rect& r);
/// Minimum distance between a segment and a closed rectangle, 0 when they meet.
double segment_rect_distance(const Segment2& seg, const Rect& r);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Arc of directions on the unit circle, stored as (center, half-width) so that
/// intersections are computed on the circle and survive the +-pi seam.
struct AngularInterval {
  double center = 0.0;
  double half_width = std::numbers::pi;

  static AngularInterval full_circle() { return {0.0, std::numbers::pi}; }
  /// Interval [lo, hi] given by its bounds, lo <= hi.
  static AngularInterval from_bounds(double lo, double hi) {
    return {(lo + hi) / 2.0, (hi - lo) / 2.0};
  }

  bool is_full() const { return half_width >= std::numbers::pi; }
  double width() const { return 2.0 * half_width; }
  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
  /// Closed containment of a direction angle.
  bool contains(double direction) const;
};

/// Intersection of two arcs, at least one of which spans less than pi.
/// Returns false when the arcs are disjoint.
bool intersect(const AngularInterval& a, const AngularInterval& b, AngularInterval& out);

/// Directions from `anchor` whose rays meet the epsilon-disc around `target`:
/// [theta - alpha, theta + alpha] with alpha = asin(epsilon / |anchor target|).
/// Requires |anchor target| > epsilon.
AngularInterval wedge_of(const Point2& anchor, const Point2& target, double epsilon);

/// The set of admissible segment end points from an anchor: the intersection
/// of the tangent wedges of every constraining point, minus the closed disc of
/// radius `min_radius` around the anchor.
class CandidateRegion {
 public:
  CandidateRegion() = default;
  explicit CandidateRegion(const Point2& anchor) : anchor_(anchor) {}

  const Point2& anchor() const { return anchor_; }
  const AngularInterval& wedge() const { return wedge_; }
  double min_radius() const { return min_radius_; }
  bool empty() const { return empty_; }

  /// Narrows the region by the constraint of `p`. Requires |anchor p| > epsilon
  /// and a non-empty region.
  void update(const Point2& p, double epsilon);
  bool contains(const Point2& p) const;

 private:
  Point2 anchor_;
  AngularInterval wedge_ = AngularInterval::full_circle();
  double min_radius_ = 0.0;
  bool empty_ = false;
};

}  // namespace trajcomp
