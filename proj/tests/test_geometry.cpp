#include "support.hpp"

#include "guardsim/error.hpp"
#include "guardsim/geometry.hpp"

#include <doctest.h>

using namespace guardsim;

namespace {

SimplePolygon l_hexagon() { return oracle::load("l_hexagon").polygon; }

SimplePolygon regular(int n, double radius = 10.0) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * M_PI * k / n;
    v.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return SimplePolygon(v);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("clockwise input is reversed and reflex flags follow") {
  const SimplePolygon cw({{0, 0}, {0, 4}, {2, 4}, {2, 2}, {4, 2}, {4, 0}});
  CHECK(cw.was_reversed());
  CHECK(cw.area() == doctest::Approx(12.0));
  REQUIRE(cw.reflex_vertices().size() == 1);
  CHECK((cw[cw.reflex_vertices()[0]] - Point(2, 2)).norm() < 1e-12);
  CHECK(cw.interior_angle(cw.reflex_vertices()[0]) == doctest::Approx(1.5 * M_PI));
}

TEST_CASE("invalid rings are rejected with tags") {
  auto tag_of = [](std::vector<Point> v) {
    try {
      SimplePolygon p(std::move(v));
    } catch (const Error& e) {
      return e.tag();
    }
    return std::string("accepted");
  };
  CHECK(tag_of({{0, 0}, {4, 0}, {0, 4}, {4, 4}}) == "not-simple");
  CHECK(tag_of({{0, 0}, {2, 0}, {4, 0}, {4, 4}}) == "collinear");
  CHECK(tag_of({{0, 0}, {1, 1}}) != "accepted");
  CHECK(tag_of({{0, 0}, {1, 0}, {std::nan(""), 1}}) != "accepted");
}

TEST_CASE("lenient check drops collinear and repeated vertices") {
  const SimplePolygon p({{0, 0}, {2, 0}, {4, 0}, {4, 0}, {4, 4}, {0, 4}}, SimplePolygon::Check::lenient);
  CHECK(p.size() == 4);
}

TEST_CASE("containment agrees with the crossing oracle away from the boundary") {
  for (const std::string name : {"l_hexagon", "crown", "twenty", "corridor", "notched_nonagon"}) {
    const SimplePolygon poly = oracle::load(name).polygon;
    const auto& ring = poly.vertices();
    int mismatches = 0;
    for (const Point& p : oracle::box_samples(ring, 10000)) {
      if (oracle::boundary_distance(ring, p) <= 1e-9) continue;
      if (contains(poly, p) != oracle::crossing_inside(ring, p)) ++mismatches;
    }
    CHECK_MESSAGE(mismatches == 0, name);
  }
}

TEST_CASE("boundary points count as inside") {
  const SimplePolygon p = l_hexagon();
  CHECK(contains(p, {2, 3}));
  CHECK(contains(p, {2, 2}));
  CHECK(contains(p, {3, 2 + 5e-10}));
  CHECK_FALSE(contains(p, {3, 2 + 1e-6}));
}

TEST_CASE("segment visibility in the L hexagon") {
  const SimplePolygon p = l_hexagon();
  CHECK(segment_visible(p, {1, 1}, {3, 1}));
  CHECK_FALSE(segment_visible(p, {1, 3}, {3, 1.5}));
  CHECK_FALSE(segment_visible(p, {3, 1}, {1, 3.5}));
  // Passes exactly through the reflex corner: grazing counts as visible.
  CHECK(segment_visible(p, {1, 3}, {3, 1}));
  CHECK(oracle::sampled_los(p.vertices(), {1, 3}, {3, 1}));
}

TEST_CASE("segment visibility agrees with dense sampling and is symmetric") {
  for (const std::string name : {"l_hexagon", "crown", "septagon", "octagon", "twenty"}) {
    const SimplePolygon poly = oracle::load(name).polygon;
    const auto pts = oracle::interior_samples(poly.vertices(), 120, 1e-3, 11);
    int mismatches = 0, asymmetric = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const bool v = segment_visible(poly, pts[i], pts[i + 1]);
      if (v != segment_visible(poly, pts[i + 1], pts[i])) ++asymmetric;
      if (v != oracle::sampled_los(poly.vertices(), pts[i], pts[i + 1], 4000)) ++mismatches;
    }
    CHECK_MESSAGE(mismatches == 0, name);
    CHECK_MESSAGE(asymmetric == 0, name);
  }
}

TEST_CASE("convex polygons see everything") {
  const SimplePolygon p = regular(7);
  const auto pts = oracle::interior_samples(p.vertices(), 100);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) CHECK(segment_visible(p, pts[i], pts[i + 1]));
  const SimplePolygon v = visibility_polygon(p, {1, 2});
  CHECK(v.area() == doctest::Approx(p.area()).epsilon(1e-9));
}

TEST_CASE("visibility polygon of the L hexagon") {
  const SimplePolygon p = l_hexagon();
  const SimplePolygon full = visibility_polygon(p, {1, 1});
  CHECK(std::abs(full.area() - p.area()) <= 1e-9 * p.area());
  const SimplePolygon partial = visibility_polygon(p, {3, 1});
  CHECK(partial.area() < p.area() - 1e-3);
  // Sampled points are in the visibility polygon exactly when the sampled
  // segment from the viewpoint stays inside.
  int mismatches = 0;
  for (const Point& q : oracle::interior_samples(p.vertices(), 2000, 1e-3)) {
    // Sampled sight lines cannot resolve points hugging the shadow edge.
    if (oracle::boundary_distance(partial.vertices(), q) < 1e-3) continue;
    const bool in_view = oracle::crossing_inside(partial.vertices(), q);
    if (in_view != oracle::sampled_los(p.vertices(), {3, 1}, q, 1000)) ++mismatches;
  }
  CHECK(mismatches == 0);
  CHECK_THROWS_AS(visibility_polygon(p, {3, 3}), Error);
}

TEST_CASE("shortest paths") {
  const SimplePolygon p = l_hexagon();
  const PolyPath path = shortest_path(p, {3, 1}, {1, 3});
  CHECK(path.total_length == doctest::Approx(2 * std::sqrt(2.0)));
  const PolyPath same = shortest_path(p, {1, 1}, {1, 1});
  CHECK(same.waypoints.size() == 1);
  CHECK(same.total_length == 0.0);
  const PolyPath bend = shortest_path(p, {3.5, 1.5}, {1.5, 3.5});
  REQUIRE(bend.waypoints.size() == 3);
  CHECK((bend.waypoints[1] - Point(2, 2)).norm() < 1e-9);

  const SimplePolygon convex = regular(9);
  const PolyPath straight = shortest_path(convex, {-3, 1}, {4, -2});
  CHECK(straight.waypoints.size() == 2);
  CHECK(straight.total_length == doctest::Approx((Point(4, -2) - Point(-3, 1)).norm()));
}

TEST_CASE("shortest path lengths match a visibility-graph oracle") {
  for (const std::string name : {"crown", "septagon", "octagon", "twenty", "corridor"}) {
    const SimplePolygon poly = oracle::load(name).polygon;
    const auto pts = oracle::interior_samples(poly.vertices(), 12, 1e-3, 5);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const double expected = oracle::geodesic_length(poly.vertices(), pts[i], pts[i + 1]);
      CHECK_MESSAGE(shortest_path(poly, pts[i], pts[i + 1]).total_length == doctest::Approx(expected).epsilon(1e-9), name);
    }
  }
}

TEST_CASE("kernel") {
  const auto k = kernel(l_hexagon());
  CHECK(std::abs(oracle::shoelace(k) - 4.0) < 1e-9);
  CHECK(kernel(oracle::load("crown").polygon).empty());
}

TEST_CASE("ray exit and segment helpers") {
  const SimplePolygon p = l_hexagon();
  CHECK(ray_exit(p, {1, 1}, {1, 0}) == doctest::Approx(3.0));
  CHECK(ray_exit(p, {1, 1}, {0, 1}) == doctest::Approx(3.0));
  const Segment s{{0, 0}, {4, 0}};
  CHECK(distance({2, 3}, s) == doctest::Approx(3.0));
  CHECK(project(s, {1, 5}) == doctest::Approx(0.25));
  const Ray r({0, 0}, {1, 0});
  CHECK(r.distance({-3, 4}) == doctest::Approx(5.0));
  CHECK(r.side({1, 1}) > 0);
}

}
