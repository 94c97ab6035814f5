#include "guardsim/region.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <limits>

namespace guardsim {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
// Counterclockwise, open rings: matches our own ring convention.
using BPolygon = bg::model::polygon<BPoint, false, false>;
using BMulti = bg::model::multi_polygon<BPolygon>;

BMulti to_boost(const Region& r) {
  BMulti out;
  for (const auto& ring : r.rings) {
    BPolygon poly;
    for (const Point& p : ring) poly.outer().emplace_back(p.x(), p.y());
    bg::correct(poly);
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace

Region Region::of(std::vector<Point> ring) {
  ring = clean_ring(std::move(ring), eps());
  Region r;
  if (ring.size() >= 3) {
    if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
    r.rings.push_back(std::move(ring));
  }
  return r;
}

double Region::area() const {
  double total = 0.0;
  for (const auto& ring : rings) total += std::abs(signed_area(ring));
  return total;
}

bool Region::contains(const Point& p) const {
  return std::any_of(rings.begin(), rings.end(), [&](const auto& ring) { return ring_contains(ring, p); });
}

double Region::distance_to_boundary(const Point& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ring : rings) best = std::min(best, guardsim::distance_to_boundary(ring, p));
  return best;
}

std::vector<Point> Region::vertices() const {
  std::vector<Point> out;
  for (const auto& ring : rings) out.insert(out.end(), ring.begin(), ring.end());
  return out;
}

std::vector<Point> Region::boundary_samples(double step) const {
  std::vector<Point> out;
  for (const auto& ring : rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point& a = ring[i];
      const Point& b = ring[(i + 1) % ring.size()];
      const int k = std::max(1, static_cast<int>(std::ceil((b - a).norm() / step)));
      for (int j = 0; j < k; ++j) out.push_back(a + (double(j) / k) * (b - a));
    }
  }
  return out;
}

Point Region::closest_point(const Point& p) const {
  if (contains(p)) return p;
  double best = std::numeric_limits<double>::infinity();
  Point out = p;
  for (const auto& ring : rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point c = guardsim::closest_point(Segment{ring[i], ring[(i + 1) % ring.size()]}, p);
      const double d = (c - p).norm();
      if (d < best) {
        best = d;
        out = c;
      }
    }
  }
  return out;
}

Point Region::anchor() const {
  if (rings.empty()) return Point::Zero();
  const auto largest = std::max_element(rings.begin(), rings.end(), [](const auto& x, const auto& y) {
    return std::abs(signed_area(x)) < std::abs(signed_area(y));
  });
  const Point c = ring_centroid(*largest);
  if (ring_contains(*largest, c)) return c;
  return Region{{*largest}}.closest_point(c);
}

Region intersect(const Region& a, const Region& b, double min_area) {
  if (a.empty() || b.empty()) return {};
  BMulti out;
  bg::intersection(to_boost(a), to_boost(b), out);
  Region r;
  for (const BPolygon& poly : out) {
    std::vector<Point> ring;
    for (const BPoint& p : poly.outer()) ring.emplace_back(p.x(), p.y());
    if (ring.size() > 1 && (ring.front() - ring.back()).norm() == 0.0) ring.pop_back();
    Region piece = Region::of(std::move(ring));
    if (!piece.empty() && piece.area() > min_area) r.rings.push_back(std::move(piece.rings.front()));
  }
  return r;
}

double distance(const Region& a, const Region& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ra : a.rings) {
    for (const auto& rb : b.rings) {
      if (rings_touch(ra, rb)) return 0.0;
      for (std::size_t i = 0; i < ra.size(); ++i) {
        const Segment s{ra[i], ra[(i + 1) % ra.size()]};
        for (std::size_t j = 0; j < rb.size(); ++j) best = std::min(best, guardsim::distance(s, Segment{rb[j], rb[(j + 1) % rb.size()]}));
      }
    }
  }
  return best;
}

bool touches(const Region& a, const Region& b) { return distance(a, b) <= eps(); }

}  // namespace guardsim
