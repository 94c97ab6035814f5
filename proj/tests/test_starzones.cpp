#include "support.hpp"

#include "guardsim/error.hpp"
#include "guardsim/starzones.hpp"

#include <doctest.h>

using namespace guardsim;

namespace {

// Cone at the reflex vertex spanned by the two incident edges extended past it.
bool in_wedge(const SimplePolygon& p, std::size_t v, const Point& x) {
  const Point d1 = p[v] - p[p.prev(v)];
  const Point d2 = p[v] - p[p.next(v)];
  const Point w = x - p[v];
  const double det = cross(d1, d2);
  const double a = cross(w, d2) / det;
  const double b = cross(d1, w) / det;
  return a >= 0 && b >= 0;
}

bool star_oracle(const SimplePolygon& p, std::size_t v, const Point& x) {
  return oracle::inside_closed(p.vertices(), x) && in_wedge(p, v, x) && oracle::sampled_los(p.vertices(), x, p[v], 2000);
}

bool in_rings(const std::vector<std::vector<Point>>& rings, const Point& x, double band) {
  for (const auto& r : rings)
    if (oracle::crossing_inside(r, x) && oracle::boundary_distance(r, x) > band) return true;
  return false;
}

}  // namespace

TEST_SUITE("starzones") {

TEST_CASE("L hexagon star region is the lower-left square") {
  const SimplePolygon p = oracle::load("l_hexagon").polygon;
  const StarRegion s = star_region(p, 3);
  CHECK(s.owner_vertex == 3);
  CHECK(s.region.area() == doctest::Approx(4.0).epsilon(1e-9));
  int mismatches = 0;
  for (const Point& x : oracle::box_samples(p.vertices(), 10000)) {
    const bool square = x.x() <= 2 && x.y() <= 2;
    if (std::abs(x.x() - 2) < 1e-9 || std::abs(x.y() - 2) < 1e-9) continue;
    if (s.region.contains(x) != square) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("star regions match the line-of-sight and wedge definition") {
  for (const std::string name : {"l_hexagon", "crown", "septagon", "octagon", "notched_nonagon", "twenty"}) {
    const SimplePolygon p = oracle::load(name).polygon;
    for (const StarRegion& s : star_regions(p)) {
      int mismatches = 0;
      for (const Point& x : oracle::box_samples(p.vertices(), 1000, 3 + s.owner_vertex)) {
        if (s.region.distance_to_boundary(x) <= 1e-6) continue;
        if (s.region.contains(x) != star_oracle(p, s.owner_vertex, x)) ++mismatches;
      }
      CHECK_MESSAGE(mismatches == 0, name << " vertex " << s.owner_vertex);
    }
  }
}

TEST_CASE("convex polygons have no star regions") {
  CHECK(star_regions(oracle::load("convex_hexagon").polygon).empty());
  CHECK_THROWS_AS(star_region(oracle::load("convex_hexagon").polygon, 0), Error);
}

TEST_CASE("crown star regions are disjoint") {
  const SimplePolygon p = oracle::load("crown").polygon;
  const auto regions = star_regions(p);
  REQUIRE(regions.size() == 2);
  CHECK(star_intersection(regions).empty());
  int both = 0;
  for (const Point& x : oracle::box_samples(p.vertices(), 10000))
    if (regions[0].region.contains(x) && regions[1].region.contains(x)) ++both;
  CHECK(both == 0);
}

TEST_CASE("star intersection") {
  const SimplePolygon l = oracle::load("l_hexagon").polygon;
  const auto one = star_regions(l);
  CHECK(star_intersection(one).area() == doctest::Approx(one[0].region.area()));
  const Region a = Region::of(std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Region b = Region::of(std::vector<Point>{{3, 0}, {4, 0}, {4, 1}, {3, 1}});
  CHECK(star_intersection({{0, a}, {1, b}}).empty());
  const SimplePolygon view = visibility_polygon(l, {1, 1});
  CHECK(std::abs(view.area() - l.area()) <= 1e-9 * l.area());
}

TEST_CASE("minimum-edge diagnostics") {
  const MinEdgesReport l = min_edges_check(oracle::load("l_hexagon").polygon);
  CHECK(l.disjoint_count == 1);
  CHECK(l.violations() == 0);
  const MinEdgesReport crown = min_edges_check(oracle::load("crown").polygon);
  CHECK(crown.disjoint_count == 2);
  CHECK(crown.n >= 6);
  CHECK(crown.violations() == 0);
  const MinEdgesReport oct = min_edges_check(oracle::load("octagon").polygon);
  CHECK(oct.disjoint_count <= 3);
  for (const auto& name : oracle::fixture_names())
    CHECK_MESSAGE(min_edges_check(oracle::load(name).polygon).violations() == 0, name);
}

TEST_CASE("speed bound") {
  SpeedProgram single;
  single.lengths = {2.0};
  single.singles = {{0, 1.0, "r0 <= 1"}};
  CHECK(speed_bound(single, 1.0).v_star == doctest::Approx(2.0).epsilon(1e-12));

  SpeedProgram two;
  two.lengths = {3.0, 4.0};
  two.singles = {{0, 2.0, "r0 <= 2"}, {1, 3.0, "r1 <= 3"}};
  two.pairs = {{0, 1, 4.0, "r0 + r1 <= 4"}};
  const SpeedBound b = speed_bound(two, 1.0);
  const double grid = oracle::grid_speed(3, 4, 2, 3, 4, 1.0);
  CHECK(std::abs(b.v_star - grid) <= 1e-3);
  CHECK(std::abs(b.v_star - 1.75) <= 1e-3);
  REQUIRE(b.radii.size() == 2);
  CHECK(b.radii[0] == doctest::Approx(12.0 / 7).epsilon(1e-9));
  CHECK(b.radii[1] == doctest::Approx(16.0 / 7).epsilon(1e-9));
  REQUIRE(b.active_constraints.size() == 1);
  CHECK(b.active_constraints[0] == "r0 + r1 <= 4");

  for (double v_e : {0.5, 1.0, 3.0}) CHECK(speed_bound(two, 2 * v_e).v_star == 2 * speed_bound(two, v_e).v_star);

  SpeedProgram still;
  still.lengths = {0.0};
  still.singles = {{0, 1.0, "r0 <= 1"}};
  CHECK(speed_bound(still, 1.0).v_star == 0.0);

  SpeedProgram broken;
  broken.lengths = {1.0};
  broken.singles = {{0, 0.0, "r0 <= 0"}};
  CHECK_THROWS_AS(speed_bound(broken, 1.0), Error);
}

TEST_CASE("zero-length road map") {
  RoadMap rm;
  rm.hub = {1, 1};
  rm.groups = {{3}};
  CHECK(rm.zero_length());
  CHECK(rm.length() == 0.0);
  const SimplePolygon l = oracle::load("l_hexagon").polygon;
  CHECK(build_dynamic_zones(l, rm, 1.0, 1.0).empty());
  const SpeedBound b = speed_bound(speed_program(l, rm, zone_windows(l, rm)), 1.0);
  CHECK(b.v_star == 0.0);
}

TEST_CASE("guard target interpolates along the spoke") {
  MobilePlan plan;
  plan.cell = SimplePolygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  plan.road_map.hub = {1, 1};
  plan.road_map.groups = {{}, {}};
  plan.road_map.spokes = {PolyPath::through({{1, 1}, {3, 1}})};
  DynamicZone z;
  z.spoke = 0;
  z.corner_point = {4, 5};
  z.window = Segment{{4, 5}, {10, 5}};
  z.radius = 1.0;
  plan.zones = {z};

  const GuardTarget edge = guard_target(plan, {6, 6});
  CHECK(edge.s == doctest::Approx(0.0));
  CHECK((edge.position - Point(1, 1)).norm() < 1e-12);
  const GuardTarget on_ray = guard_target(plan, {6, 5});
  CHECK(on_ray.s == doctest::Approx(2.0));
  CHECK((on_ray.position - Point(3, 1)).norm() < 1e-12);
  const GuardTarget half = guard_target(plan, {6, 5.5});
  CHECK((half.position - Point(2, 1)).norm() < 1e-12);
  REQUIRE(half.zone);
  CHECK(*half.zone == 0);
  CHECK(guard_target(plan, {6, 8}).s == 0.0);
}

TEST_CASE("crown mobile plan") {
  const SimplePolygon p = oracle::load("crown").polygon;
  const MobilePlan plan = plan_mobile(p, 1.0);
  REQUIRE(plan.road_map.spokes.size() == 1);
  REQUIRE(!plan.zones.empty());
  CHECK(plan.self_check_failures == 0);
  const double len = plan.road_map.length();
  CHECK(len > 0);
  CHECK(plan.bound.v_star == doctest::Approx(len / plan.zones[0].radius).epsilon(1e-9));
  // Region boundaries are sampled, so the closed form is met to about 1e-7.
  CHECK(plan.bound.v_star == doctest::Approx(5.0 / 6.0).epsilon(1e-6));
  // Hub and spoke end sit in the two star regions.
  const auto regions = star_regions(p);
  const Point end = plan.road_map.at(0, len);
  const bool hub_first = regions[0].region.distance_to_boundary(plan.road_map.hub) < 1e-6 || regions[0].region.contains(plan.road_map.hub);
  const Region& a = regions[hub_first ? 0 : 1].region;
  const Region& b = regions[hub_first ? 1 : 0].region;
  CHECK((a.contains(plan.road_map.hub) || a.distance_to_boundary(plan.road_map.hub) < 1e-6));
  CHECK((b.contains(end) || b.distance_to_boundary(end) < 1e-6));

  const double v_star = plan.bound.v_star;
  const auto zones = build_dynamic_zones(p, plan.road_map, 1.0, v_star);
  for (const DynamicZone& z : zones) CHECK(z.radius == doctest::Approx(len / v_star));
  CHECK_THROWS_AS(build_dynamic_zones(p, plan.road_map, 1.0, v_star * (1 - 1e-3)), Error);
  try {
    build_dynamic_zones(p, plan.road_map, 1.0, v_star * (1 - 1e-3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::speed_too_low);
  }
  // Zones of one speed do not overlap and never reach the other reflex corner.
  for (std::size_t i = 0; i < zones.size(); ++i) {
    for (std::size_t c : p.reflex_vertices())
      if (c != zones[i].corner) CHECK(distance(p[c], zones[i].window) >= zones[i].radius - 1e-9);
    for (std::size_t j = i + 1; j < zones.size(); ++j) {
      int overlap = 0;
      for (const Point& x : oracle::box_samples(p.vertices(), 20000))
        if (in_rings(zones[i].outline, x, 1e-6) && in_rings(zones[j].outline, x, 1e-6)) ++overlap;
      CHECK(overlap == 0);
    }
  }
}

TEST_CASE("zone membership by distance to the trigger ray") {
  const SimplePolygon p = oracle::load("crown").polygon;
  const MobilePlan plan = plan_mobile(p, 1.0);
  const auto zones = build_dynamic_zones(p, plan.road_map, 1.0, 2 * plan.bound.v_star);
  REQUIRE(!zones.empty());
  const DynamicZone& z = zones[0];
  const double len = plan.road_map.spokes[z.spoke].total_length;
  CHECK(z.radius == doctest::Approx(len / (2 * plan.bound.v_star)));
  // The hub sits on the window's line, so the zone lies on whichever side of
  // the window the hub can see. Half a radius off the window is inside the
  // outline, one and a half radii is not.
  const Point mid = z.window.at(0.5);
  const Point normal = perp(z.window.b - z.window.a).normalized();
  const Point n = oracle::sampled_los(p.vertices(), plan.road_map.hub, mid + 1e-3 * normal) ? normal : Point(-normal);
  CHECK(in_rings(z.outline, mid + 0.5 * z.radius * n, 1e-9));
  CHECK_FALSE(in_rings(z.outline, mid + 1.5 * z.radius * n, 1e-9));
}

TEST_CASE("mobile plans for the fixture cells pass their self-check") {
  for (const std::string name : {"crown", "septagon", "octagon"}) {
    const SimplePolygon p = oracle::load(name).polygon;
    const MobilePlan plan = plan_mobile(p, 1.0);
    CHECK_MESSAGE(plan.self_check_failures == 0, name);
    CHECK_MESSAGE(self_check(plan, 400) == 0, name);
  }
}

}
