#pragma once
// Possibly disconnected planar region stored as counterclockwise outer rings.

#include "guardsim/geometry.hpp"

#include <vector>

namespace guardsim {

struct Region {
  std::vector<std::vector<Point>> rings;

  static Region of(const SimplePolygon& polygon) { return Region{{polygon.vertices()}}; }
  static Region of(std::vector<Point> ring);

  bool empty() const { return rings.empty(); }
  double area() const;
  bool contains(const Point& p) const;
  double distance_to_boundary(const Point& p) const;
  /// All ring vertices.
  std::vector<Point> vertices() const;
  /// Boundary points spaced at most `step` apart, ring vertices included.
  std::vector<Point> boundary_samples(double step) const;
  /// Point of the region closest to p (p itself when inside).
  Point closest_point(const Point& p) const;
  /// Centroid of the largest ring, or the closest interior point to it.
  Point anchor() const;
};

/// Boolean intersection; pieces with area below `min_area` are discarded.
Region intersect(const Region& a, const Region& b, double min_area = 1e-12);
/// Closed regions at distance zero (within eps()).
bool touches(const Region& a, const Region& b);
double distance(const Region& a, const Region& b);

}  // namespace guardsim
