#include "support.hpp"

#include "guardsim/error.hpp"
#include "guardsim/orthogonal.hpp"

#include <doctest.h>

#include <set>

using namespace guardsim;

namespace {

const std::vector<std::string> orthogonal_fixtures = {"rectangle", "l_orthogonal", "staircase", "plus", "corridor"};

bool convex_quad(const SimplePolygon& p, const Quad& q) {
  for (int k = 0; k < 4; ++k)
    if (orient(p[q[k]], p[q[(k + 1) % 4]], p[q[(k + 2) % 4]]) <= 0) return false;
  return true;
}

std::vector<Point> ring_of(const SimplePolygon& p, const Quad& q) { return {p[q[0]], p[q[1]], p[q[2]], p[q[3]]}; }

void check_valid(const std::string& name, const Quadrilateralization& q) {
  const SimplePolygon& p = q.polygon;
  double area = 0;
  for (const Quad& quad : q.quads) {
    CHECK_MESSAGE(convex_quad(p, quad), name);
    area += oracle::shoelace(ring_of(p, quad));
  }
  CHECK_MESSAGE(std::abs(area - p.area()) <= 1e-9 * p.area(), name);
  int overlaps = 0;
  for (const Point& x : oracle::interior_samples(p.vertices(), 2000, 1e-6)) {
    int holders = 0;
    for (const Quad& quad : q.quads) {
      const auto r = ring_of(p, quad);
      if (oracle::crossing_inside(r, x) && oracle::boundary_distance(r, x) > 1e-6) ++holders;
    }
    overlaps += holders > 1;
  }
  CHECK_MESSAGE(overlaps == 0, name);
  const QuadDualTree tree = quad_dual_tree(q);
  CHECK_MESSAGE(tree.is_tree(), name);
  CHECK_MESSAGE(tree.max_degree() <= 4, name);
  CHECK_MESSAGE(tree.edges.size() == q.diagonals.size(), name);
}

}  // namespace

TEST_SUITE("orthogonal") {

TEST_CASE("orthogonality") {
  for (const auto& name : orthogonal_fixtures) CHECK_MESSAGE(is_orthogonal(oracle::load(name).polygon), name);
  CHECK_FALSE(is_orthogonal(oracle::load("crown").polygon));
  CHECK_FALSE(is_orthogonal(SimplePolygon({{0, 0}, {4, 0}, {4, 2}, {1, 4}})));
  CHECK_THROWS_AS(quadrilateralize(oracle::load("crown").polygon), Error);
}

TEST_CASE("quadrilateralizations are convex tilings with tree duals") {
  for (const auto& name : orthogonal_fixtures) check_valid(name, quadrilateralize(oracle::load(name).polygon));
}

TEST_CASE("rectangle, L and staircase") {
  const auto rect = quadrilateralize(oracle::load("rectangle").polygon);
  REQUIRE(rect.quads.size() == 1);
  CHECK(std::set<std::size_t>(rect.quads[0].begin(), rect.quads[0].end()) == std::set<std::size_t>{0, 1, 2, 3});
  CHECK(quadrilateralize(oracle::load("l_orthogonal").polygon).quads.size() == 2);
  const auto stairs = quadrilateralize(oracle::load("staircase").polygon);
  CHECK(stairs.quads.size() == 3);
  CHECK(quad_dual_tree(stairs).is_path());
}

TEST_CASE("supplied quads are validated") {
  const PolygonFile file = oracle::load("l_orthogonal_quads");
  REQUIRE(file.quads);
  const auto q = quadrilateralize(file.polygon, *file.quads);
  check_valid("l_orthogonal_quads", q);
  CHECK(q.diagonals.size() == 1);
  auto tag = [&](std::vector<Quad> quads) {
    try {
      quadrilateralize(file.polygon, std::move(quads));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::quadrilateralization_failed);
      return true;
    }
    return false;
  };
  CHECK(tag({{0, 1, 2, 3}}));                        // does not cover
  CHECK(tag({{0, 1, 2, 4}, {0, 2, 4, 5}}));          // non-convex or overlapping
  CHECK(tag({{0, 1, 2, 9}, {0, 3, 4, 5}}));          // bad index
  CHECK(tag({{0, 1, 2, 3}, {0, 3, 4, 5}, {0, 1, 2, 3}}));
}

TEST_CASE("grouping counts") {
  for (const auto& name : orthogonal_fixtures) {
    const auto q = quadrilateralize(oracle::load(name).polygon);
    const QuadGrouping g = quad_group(q);
    std::set<std::size_t> used;
    int n2 = 0, n3 = 0, n4 = 0;
    for (const QuadGroup& group : g.groups) {
      CHECK_MESSAGE(group.quads.size() >= 2, name);
      CHECK_MESSAGE(group.quads.size() <= 4, name);
      n2 += group.quads.size() == 2;
      n3 += group.quads.size() == 3;
      n4 += group.quads.size() == 4;
      for (std::size_t k : group.quads) CHECK_MESSAGE(used.insert(k).second, name);
      double area = 0;
      for (std::size_t k : group.quads) area += oracle::shoelace(ring_of(q.polygon, q.quads[k]));
      CHECK_MESSAGE(group.polygon.area() == doctest::Approx(area).epsilon(1e-9), name);
      CHECK_MESSAGE(group.polygon.reflex_vertices().size() <= 3, name);
    }
    if (g.leftover) CHECK_MESSAGE(used.insert(*g.leftover).second, name);
    CHECK_MESSAGE(used.size() == q.quads.size(), name);
    const int r = static_cast<int>(q.quads.size());
    CHECK_MESSAGE(r == 2 * n2 + 3 * n3 + 4 * n4 + (g.leftover ? 1 : 0), name);
  }
}

TEST_CASE("merged ring of two quads") {
  const auto ring = merged_ring({Quad{0, 1, 2, 3}, Quad{0, 3, 4, 5}});
  CHECK(ring.size() == 6);
}

TEST_CASE("deployments") {
  {
    const DeploymentPlan plan = deploy_orthogonal(oracle::load("rectangle").polygon, 1.0);
    CHECK(plan.guard_total == 1);
    REQUIRE(plan.assignments.size() == 1);
    CHECK(plan.assignments[0].mode == GuardMode::fixed);
    CHECK(plan.divisor == 4);
  }
  {
    const DeploymentPlan plan = deploy_orthogonal(oracle::load("corridor").polygon, 1.0);
    REQUIRE(plan.orthogonal);
    const auto& s = *plan.orthogonal;
    CHECK(s.quad_count() == 8);
    CHECK(s.n3 == 2);
    CHECK(s.n2 == 1);
    CHECK_FALSE(s.leftover);
    CHECK(plan.guard_total == 3);
    CHECK(plan.bound == 4);
    CHECK(plan.hypotheses_hold);
    CHECK(plan.satisfies);
  }
  {
    const DeploymentPlan plan = deploy_orthogonal(oracle::load("plus").polygon, 1.0);
    REQUIRE(plan.orthogonal);
    CHECK(plan.orthogonal->n4 == 1);
    CHECK(plan.guard_total < plan.bound);
    CHECK(plan.hypotheses_hold);
  }
  {
    const DeploymentPlan plan = deploy_orthogonal(oracle::load("l_orthogonal").polygon, 1.0);
    CHECK(plan.guard_total == 1);
    CHECK(plan.bound == 1);
    CHECK_FALSE(plan.hypotheses_hold);
  }
  for (const auto& name : orthogonal_fixtures) {
    const DeploymentPlan plan = deploy_orthogonal(oracle::load(name).polygon, 1.0);
    REQUIRE(plan.orthogonal);
    const auto& s = *plan.orthogonal;
    CHECK_MESSAGE(s.doubled_identity_holds(), name);
    CHECK_MESSAGE(s.floor_form() <= s.floor_exact(), name);
    if (s.leftover) CHECK_MESSAGE(s.floor_form() == s.floor_exact(), name);
    CHECK_MESSAGE(s.floor_exact() == static_cast<int>(plan.polygon.size()) / 4, name);
    CHECK_MESSAGE(plan.guard_total == s.group_count() + s.k_prime(), name);
    if (plan.hypotheses_hold) CHECK_MESSAGE(plan.guard_total < plan.bound, name);
  }
}

}
