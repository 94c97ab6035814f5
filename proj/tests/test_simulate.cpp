#include "support.hpp"

#include "guardsim/deploy.hpp"
#include "guardsim/error.hpp"
#include "guardsim/io.hpp"
#include "guardsim/simulate.hpp"

#include <doctest.h>

using namespace guardsim;

namespace {

double road_distance(const RoadMap& rm, const Point& g) {
  double best = (g - rm.hub).norm();
  for (const PolyPath& s : rm.spokes)
    for (std::size_t k = 0; k + 1 < s.waypoints.size(); ++k)
      best = std::min(best, oracle::segment_distance(g, s.waypoints[k], s.waypoints[k + 1]));
  return best;
}

SimConfig config_for(const DeploymentPlan& plan, Policy policy, int steps) {
  SimConfig c;
  c.v_e = plan.v_e;
  c.v_p = plan.global_v_star;
  c.steps = steps;
  c.policy = policy;
  return c;
}

std::string tag_of(const DeploymentPlan& plan, const SimConfig& c) {
  try {
    Simulator sim(plan, c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config_invalid);
    return e.tag();
  }
  return "accepted";
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("policy names") {
  CHECK(parse_policy("random_walk") == Policy::random_walk);
  CHECK(parse_policy("greedy_escape") == Policy::greedy_escape);
  CHECK(parse_policy("corner_rush") == Policy::corner_rush);
  CHECK(parse_policy("scripted") == Policy::scripted);
  CHECK(to_string(Policy::steer) == "steer");
  CHECK_THROWS_AS(parse_policy("teleport"), Error);
}

TEST_CASE("speed contract, containment and road-map membership") {
  for (const std::string name : {"crown", "twenty", "octagon"}) {
    const DeploymentPlan plan = deploy_polygon(oracle::load(name).polygon, 1.0);
    for (Policy policy : {Policy::random_walk, Policy::greedy_escape, Policy::corner_rush}) {
      const SimConfig c = config_for(plan, policy, 600);
      const SimTrace trace = run(plan, c);
      REQUIRE(trace.states.size() == 601);
      const double dt = trace.config.dt;
      CHECK(dt > 0);
      CHECK(dt <= max_dt(plan, c.v_e) + 1e-15);
      const auto& ring = plan.polygon.vertices();
      int violations = 0;
      for (std::size_t k = 0; k < trace.states.size(); ++k) {
        const SimState& s = trace.states[k];
        CHECK(s.step == static_cast<int>(k));
        if (!oracle::inside_closed(ring, s.intruder, 1e-9)) ++violations;
        for (std::size_t j = 0; j < plan.assignments.size(); ++j) {
          const auto& a = plan.assignments[j];
          if (a.mode == GuardMode::fixed) {
            if ((s.guards[j] - a.position).norm() > 1e-12) ++violations;
          } else if (road_distance(a.mobile->road_map, s.guards[j]) > 1e-9) {
            ++violations;
          }
        }
        if (k == 0) continue;
        const SimState& prev = trace.states[k - 1];
        if ((s.intruder - prev.intruder).norm() > c.v_e * dt + 1e-9) ++violations;
        for (std::size_t j = 0; j < s.guards.size(); ++j)
          if ((s.guards[j] - prev.guards[j]).norm() > c.v_p * dt + 1e-9) ++violations;
      }
      CHECK_MESSAGE(violations == 0, name << " " << to_string(policy));
      std::vector<int> breaches;
      for (const SimState& s : trace.states)
        if (!s.visible) breaches.push_back(s.step);
      CHECK(breaches == trace.breach_steps);
    }
  }
}

TEST_CASE("zero steps gives the initial state only") {
  for (const std::string name : {"l_hexagon", "crown", "corridor"}) {
    const auto file = oracle::load(name);
    const DeploymentPlan plan = file.orthogonal ? deploy_orthogonal(file.polygon, 1.0) : deploy_polygon(file.polygon, 1.0);
    const SimTrace trace = run(plan, config_for(plan, Policy::random_walk, 0));
    REQUIRE(trace.states.size() == 1);
    CHECK(trace.states[0].step == 0);
    CHECK(trace.states[0].visible);
    CHECK_FALSE(trace.states[0].responsible.empty());
  }
}

TEST_CASE("a still intruder stays watched") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("crown").polygon, 1.0);
  SimConfig c = config_for(plan, Policy::random_walk, 300);
  c.v_e = 0.0;
  c.start = Point(5.8, 3.0);
  const SimTrace trace = run(plan, c);
  for (const SimState& s : trace.states) {
    CHECK((s.intruder - Point(5.8, 3.0)).norm() == 0.0);
    CHECK(s.visible);
  }
  // The guard settles at the end of its spoke.
  const auto& a = plan.assignments[0];
  const GuardTarget target = guard_target(*a.mobile, {5.8, 3.0});
  CHECK((trace.states.back().guards[0] - target.position).norm() < 1e-9);
}

TEST_CASE("same configuration, same trace") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("twenty").polygon, 1.0);
  for (Policy policy : {Policy::random_walk, Policy::greedy_escape, Policy::corner_rush}) {
    const SimConfig c = config_for(plan, policy, 400);
    CHECK(states_digest(run(plan, c).states) == states_digest(run(plan, c).states));
  }
  SimConfig a = config_for(plan, Policy::random_walk, 400);
  SimConfig b = a;
  b.seed = 7;
  CHECK(states_digest(run(plan, a).states) != states_digest(run(plan, b).states));
}

TEST_CASE("reset replays the run") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("crown").polygon, 1.0);
  Simulator sim(plan, config_for(plan, Policy::random_walk, 0));
  std::vector<SimState> first{sim.state()};
  for (int k = 0; k < 50; ++k) first.push_back(sim.step());
  sim.reset();
  std::vector<SimState> second{sim.state()};
  for (int k = 0; k < 50; ++k) second.push_back(sim.step());
  CHECK(states_digest(first) == states_digest(second));
}

TEST_CASE("steer events drive the intruder") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("crown").polygon, 1.0);
  SimConfig c = config_for(plan, Policy::steer, 20);
  c.start = Point(3, 0.5);
  c.steer_events = {{0, {1, 0}, 1.0}, {10, {-1, 0}, 0.5}};
  const SimTrace trace = run(plan, c);
  const double dt = trace.config.dt;
  CHECK(trace.states[10].intruder.x() == doctest::Approx(3 + 10 * dt).epsilon(1e-9));
  CHECK(trace.states[20].intruder.x() == doctest::Approx(3 + 10 * dt - 5 * dt).epsilon(1e-9));
}

TEST_CASE("scripted waypoints are followed") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("l_hexagon").polygon, 1.0);
  SimConfig c = config_for(plan, Policy::scripted, 2000);
  c.start = Point(1, 1);
  c.waypoints = {{3.5, 1}, {1, 3.5}};
  const SimTrace trace = run(plan, c);
  double max_x = 0, max_y = 0;
  for (const SimState& s : trace.states) {
    max_x = std::max(max_x, s.intruder.x());
    max_y = std::max(max_y, s.intruder.y());
  }
  CHECK(max_x == doctest::Approx(3.5).epsilon(1e-9));
  CHECK(max_y == doctest::Approx(3.5).epsilon(1e-9));
  CHECK(trace.breach_steps.empty());
}

TEST_CASE("invalid configurations") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("crown").polygon, 1.0);
  const SimConfig ok = config_for(plan, Policy::random_walk, 10);
  CHECK(tag_of(plan, ok) == "accepted");
  SimConfig c = ok;
  c.v_e = -1;
  CHECK(tag_of(plan, c) == "bad-speed");
  c = ok;
  c.v_p = std::nan("");
  CHECK(tag_of(plan, c) == "bad-speed");
  c = ok;
  c.steps = -1;
  CHECK(tag_of(plan, c) == "bad-steps");
  c = ok;
  c.dt = 10 * max_dt(plan, 1.0);
  CHECK(tag_of(plan, c) == "dt-too-large");
  c = ok;
  c.start = Point(3, 3);
  CHECK(tag_of(plan, c) == "start-outside");
  c = ok;
  c.policy = Policy::scripted;
  CHECK(tag_of(plan, c) == "no-waypoints");
  c.waypoints = {{3, 3}};
  CHECK(tag_of(plan, c) == "waypoint-outside");
  c = ok;
  c.policy = Policy::steer;
  c.steer_events = {{5, {1, 0}, 1}, {2, {0, 1}, 1}};
  CHECK(tag_of(plan, c) == "steer-order");
}

TEST_CASE("step bound") {
  const DeploymentPlan plan = deploy_polygon(oracle::load("crown").polygon, 1.0);
  double r_min = std::numeric_limits<double>::infinity();
  for (const auto& z : plan.assignments[0].mobile->zones) r_min = std::min(r_min, z.radius);
  const double expected = std::min(r_min / 4, plan.polygon.diameter() / 50);
  CHECK(max_dt(plan, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(max_dt(plan, 2.0) == doctest::Approx(expected / 2).epsilon(1e-12));
  CHECK(max_dt(plan, 0.0) == 1.0);
}

TEST_CASE("corner rush targets sit beside each reflex corner") {
  const SimplePolygon p = oracle::load("crown").polygon;
  const auto pts = corner_rush_waypoints(p);
  CHECK(pts.size() >= 4);
  for (const Point& x : pts) CHECK(oracle::inside_closed(p.vertices(), x));
  const Point s = default_start(p);
  CHECK(oracle::crossing_inside(p.vertices(), s));
}

}
