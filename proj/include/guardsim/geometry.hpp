#pragma once
// Planar kernel: points, segments, rays, simple polygons, containment,
// line-of-sight, visibility polygons and geodesics inside a polygon.
//
// All predicates share a single absolute tolerance eps() (default 1e-9 world
// units, overridable through GUARDSIM_EPS). Points closer than eps() to the
// boundary count as inside, and a line of sight that grazes the boundary,
// including passing exactly through a reflex corner, counts as unobstructed.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace guardsim {

using Point = Eigen::Vector2d;

/// Boundary tolerance in world units.
double eps();

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Twice the signed area of triangle abc; positive when counterclockwise.
inline double orient(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a); }

inline Point perp(const Point& v) { return {-v.y(), v.x()}; }

inline Point rotate(const Point& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

struct Segment {
  Point a;
  Point b;

  double length() const { return (b - a).norm(); }
  Point at(double t) const { return a + t * (b - a); }
};

double distance(const Point& p, const Segment& s);
Point closest_point(const Segment& s, const Point& p);
/// Parameter in [0,1] of the point of s closest to p.
double project(const Segment& s, const Point& p);
double distance(const Segment& s, const Segment& t);
/// True when the closed segments share a point (within eps()).
bool segments_touch(const Segment& s, const Segment& t);

class Ray {
 public:
  Ray(const Point& origin, const Point& direction);

  const Point& origin() const { return origin_; }
  const Point& direction() const { return direction_; }
  Point at(double t) const { return origin_ + t * direction_; }
  /// Euclidean distance from p to the closed half-line.
  double distance(const Point& p) const;
  /// Signed offset of p from the supporting line, positive to the left.
  double side(const Point& p) const { return cross(direction_, p - origin_); }

 private:
  Point origin_;
  Point direction_;
};

/// Ordered counterclockwise vertex ring. Construction validates the ring and
/// reverses clockwise input.
class SimplePolygon {
 public:
  enum class Check {
    /// User input: rejects collinear consecutive vertices.
    strict,
    /// Derived geometry: duplicate and collinear vertices are dropped.
    lenient,
    /// Sub-polygons cut along diagonals: flat vertices are kept (never reflex)
    /// so vertex indices stay aligned with the parent polygon.
    preserve,
  };

  SimplePolygon() = default;
  explicit SimplePolygon(std::vector<Point> vertices, Check check = Check::strict);

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  std::size_t next(std::size_t i) const { return (i + 1) % vertices_.size(); }
  std::size_t prev(std::size_t i) const { return (i + vertices_.size() - 1) % vertices_.size(); }
  /// Edge from vertex i to vertex i+1.
  Segment edge(std::size_t i) const { return {vertices_[i], vertices_[next(i)]}; }

  bool is_reflex(std::size_t i) const { return reflex_[i]; }
  const std::vector<bool>& reflex_flags() const { return reflex_; }
  std::vector<std::size_t> reflex_vertices() const;
  /// Interior angle at vertex i in (0, 2*pi).
  double interior_angle(std::size_t i) const;

  double area() const { return area_; }
  double perimeter() const;
  Point centroid() const;
  double diameter() const;
  Eigen::AlignedBox2d bounds() const;
  /// True if the ring was given clockwise and reversed on construction.
  bool was_reversed() const { return reversed_; }

 private:
  std::vector<Point> vertices_;
  std::vector<bool> reflex_;
  double area_ = 0.0;
  bool reversed_ = false;
};

/// Signed area of a ring (positive for counterclockwise).
double signed_area(std::span<const Point> ring);
Point ring_centroid(std::span<const Point> ring);
double distance_to_boundary(std::span<const Point> ring, const Point& p);
/// Ray-crossing test on a raw ring, boundary within eps() counts as inside.
bool ring_contains(std::span<const Point> ring, const Point& p);
/// Rings whose closed regions are at distance 0 (within eps()).
bool rings_touch(std::span<const Point> a, std::span<const Point> b);

struct PolyPath {
  std::vector<Point> waypoints;
  double total_length = 0.0;

  static PolyPath through(std::vector<Point> waypoints);
  /// Point at arc length s, clamped to [0, total_length].
  Point at_length(double s) const;
  /// Arc length of the point of the path closest to p.
  double locate(const Point& p) const;
  PolyPath reversed() const;
};

bool contains(const SimplePolygon& polygon, const Point& p);
double distance_to_boundary(const SimplePolygon& polygon, const Point& p);
bool segment_visible(const SimplePolygon& polygon, const Point& a, const Point& b);
/// Distance along the ray from `origin` in `direction` (unit) until it leaves
/// the polygon. Returns 0 when the ray leaves immediately.
double ray_exit(const SimplePolygon& polygon, const Point& origin, const Point& direction);
/// Star-shaped region seen from p. Throws DegenerateInput if p is outside.
SimplePolygon visibility_polygon(const SimplePolygon& polygon, const Point& p);
/// Geodesic through reflex vertices (visibility-graph Dijkstra).
PolyPath shortest_path(const SimplePolygon& polygon, const Point& a, const Point& b);
/// Geodesic distances between every pair of reflex vertices, indexed like
/// polygon.reflex_vertices(). Unreachable pairs cannot occur in a simple polygon.
std::vector<std::vector<double>> reflex_geodesics(const SimplePolygon& polygon);

/// Convex ring of points that see the whole polygon; empty when not star-shaped.
std::vector<Point> kernel(const SimplePolygon& polygon);
/// Keep the part of a ring on the left of the directed line a->b.
std::vector<Point> clip_left(std::span<const Point> ring, const Point& a, const Point& b);
/// Drop repeated and collinear vertices from a ring.
std::vector<Point> clean_ring(std::vector<Point> ring, double tolerance);

}  // namespace guardsim
