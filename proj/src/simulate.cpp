#include "guardsim/simulate.hpp"

#include "guardsim/error.hpp"
#include "guardsim/triangulation.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace guardsim {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::random_walk: return "random_walk";
    case Policy::greedy_escape: return "greedy_escape";
    case Policy::corner_rush: return "corner_rush";
    case Policy::scripted: return "scripted";
    case Policy::steer: return "steer";
  }
  return "random_walk";
}

Policy parse_policy(std::string_view name) {
  for (Policy p : {Policy::random_walk, Policy::greedy_escape, Policy::corner_rush, Policy::scripted, Policy::steer})
    if (to_string(p) == name) return p;
  // "greedy" and "corner-rush" are accepted as shorthands on the command line
  if (name == "greedy") return Policy::greedy_escape;
  if (name == "corner-rush" || name == "corner") return Policy::corner_rush;
  if (name == "random") return Policy::random_walk;
  throw Error(ErrorKind::config_invalid, "unknown-policy", "unknown policy '" + std::string(name) + "'");
}

double max_dt(const DeploymentPlan& plan, double v_e) {
  if (!(v_e > 0.0)) return 1.0;
  double r_min = std::numeric_limits<double>::infinity();
  for (const GuardAssignment& a : plan.assignments) {
    if (!a.mobile) continue;
    for (const DynamicZone& z : a.mobile->zones)
      if (z.radius > 0.0) r_min = std::min(r_min, z.radius);
  }
  return std::min(r_min / (4.0 * v_e), plan.polygon.diameter() / (50.0 * v_e));
}

Point default_start(const SimplePolygon& polygon) {
  const Point c = polygon.centroid();
  if (contains(polygon, c) && distance_to_boundary(polygon, c) > 1e-6) return c;
  const Triangulation t = triangulate(polygon);
  double best = -1.0;
  Point pick = c;
  for (const auto& tri : t.triangles) {
    const Point g = (polygon[tri[0]] + polygon[tri[1]] + polygon[tri[2]]) / 3.0;
    const double d = distance_to_boundary(polygon, g);
    if (d > best) {
      best = d;
      pick = g;
    }
  }
  return pick;
}

std::vector<Point> corner_rush_waypoints(const SimplePolygon& polygon) {
  std::vector<Point> out;
  const double reach = 0.1 * polygon.diameter();
  const auto reflex = polygon.reflex_vertices();
  if (reflex.empty()) {
    const Point c = polygon.centroid();
    for (const Point& v : polygon.vertices()) out.push_back(v + 0.1 * (c - v));
    return out;
  }
  for (std::size_t i : reflex) {
    const Point& c = polygon[i];
    for (const Point& from : {polygon[polygon.prev(i)], polygon[polygon.next(i)]}) {
      const Point u = (c - from).normalized();
      const double room = ray_exit(polygon, c, u);
      if (room <= eps()) continue;
      out.push_back(c + std::min(reach, 0.5 * room) * u);
    }
  }
  return out;
}

namespace {

bool shares_edge(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, Segment& edge,
                 const SimplePolygon& root) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t x = a[i], y = a[(i + 1) % a.size()];
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] == y && b[(j + 1) % b.size()] == x) {
        edge = {root[x], root[y]};
        return true;
      }
  }
  return false;
}

}  // namespace

Simulator::Simulator(const DeploymentPlan& plan, SimConfig config) : plan_(&plan), config_(std::move(config)) {
  const SimplePolygon& P = plan.polygon;
  if (!(config_.v_e >= 0.0) || !(config_.v_p >= 0.0) || !std::isfinite(config_.v_e) || !std::isfinite(config_.v_p))
    throw Error(ErrorKind::config_invalid, "bad-speed", "speeds must be finite and non-negative");
  if (!std::is_sorted(config_.steer_events.begin(), config_.steer_events.end(),
                      [](const SteerEvent& a, const SteerEvent& b) { return a.step < b.step; }))
    throw Error(ErrorKind::config_invalid, "steer-order", "steer events must be ordered by step");
  if (config_.steps < 0) throw Error(ErrorKind::config_invalid, "bad-steps", "steps must be non-negative");
  const double limit = max_dt(plan, config_.v_e);
  if (config_.dt <= 0.0) {
    config_.dt = limit;
  } else if (config_.dt > limit * (1.0 + 1e-12)) {
    throw Error(ErrorKind::config_invalid, "dt-too-large",
                "dt " + std::to_string(config_.dt) + " exceeds the admissible " + std::to_string(limit));
  }
  if (!config_.start) config_.start = default_start(P);
  if (!contains(P, *config_.start))
    throw Error(ErrorKind::config_invalid, "start-outside", "intruder start lies outside the polygon");
  if (config_.policy == Policy::scripted) {
    if (config_.waypoints.empty())
      throw Error(ErrorKind::config_invalid, "no-waypoints", "scripted policy needs waypoints");
    for (const Point& w : config_.waypoints)
      if (!contains(P, w)) throw Error(ErrorKind::config_invalid, "waypoint-outside", "waypoint outside the polygon");
    loop_ = config_.waypoints;
  } else if (config_.policy == Policy::corner_rush) {
    loop_ = corner_rush_waypoints(P);
  }

  const std::size_t m = plan.assignments.size();
  shared_edge_.resize(m * m);
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      if (shares_edge(plan.assignments[a].cell.vertex_ids, plan.assignments[b].cell.vertex_ids, shared_edge_[a * m + b],
                      P))
        adj[a].push_back(b);
    }
  // next_hop_[a][b]: neighbour of a on the way to b in the cell tree.
  next_hop_.assign(m, std::vector<std::size_t>(m, 0));
  for (std::size_t b = 0; b < m; ++b) {
    std::vector<std::size_t> queue{b};
    std::vector<char> seen(m, 0);
    seen[b] = 1;
    next_hop_[b][b] = b;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t v = queue[head];
      for (std::size_t w : adj[v]) {
        if (seen[w]) continue;
        seen[w] = 1;
        next_hop_[w][b] = v;
        queue.push_back(w);
      }
    }
  }
  reset();
}

void Simulator::reset() {
  rng_.seed(config_.seed);
  heading_ = 2.0 * std::numbers::pi * uniform();
  steer_ = Point::Zero();
  loop_index_ = 0;
  steer_cursor_ = 0;
  leg_.reset();

  const std::size_t m = plan_->assignments.size();
  state_ = SimState{};
  state_.intruder = *config_.start;
  state_.guards.resize(m);
  state_.active_zone.assign(m, std::nullopt);
  mobile_.assign(m, MobileGuard{});
  cell_ = cell_of(state_.intruder);
  for (std::size_t a = 0; a < m; ++a) {
    const GuardAssignment& g = plan_->assignments[a];
    state_.guards[a] = g.position;
    if (!g.mobile) continue;
    const GuardTarget t = target_for(a, state_.intruder, cell_);
    mobile_[a] = {t.spoke, t.s};
    state_.guards[a] = g.mobile->road_map.at(t.spoke, t.s);
    if (t.s > 0.0) state_.active_zone[a] = t.zone;
  }
  evaluate(std::nullopt);
}

void Simulator::set_steer(const Point& heading, double magnitude) {
  const double n = heading.norm();
  magnitude = std::clamp(std::isfinite(magnitude) ? magnitude : 0.0, 0.0, 1.0);
  steer_ = n > 0.0 && std::isfinite(n) ? Point(heading / n * magnitude) : Point(Point::Zero());
}

double Simulator::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::optional<std::size_t> Simulator::cell_of(const Point& p) const {
  for (std::size_t a = 0; a < plan_->assignments.size(); ++a)
    if (contains(plan_->assignments[a].cell.polygon, p)) return a;
  return std::nullopt;
}

GuardTarget Simulator::target_for(std::size_t a, const Point& e, std::optional<std::size_t> e_cell) const {
  const MobilePlan& plan = *plan_->assignments[a].mobile;
  if (!e_cell || *e_cell == a) return guard_target(plan, e);
  // Outside its cell the guard prepares for the intruder's return through
  // the cell's shared edge on the way to the intruder.
  const std::size_t m = plan_->assignments.size();
  const std::size_t hop = next_hop_[a][*e_cell];
  if (hop == a) return guard_target(plan, e, false);
  const Segment& door = shared_edge_[a * m + hop];
  return guard_target(plan, closest_point(door, e));
}

bool Simulator::valid_move(const Point& from, const Point& to) const {
  return contains(plan_->polygon, to) && segment_visible(plan_->polygon, from, to);
}

Point Simulator::follow_waypoints(double budget) {
  const Point& e = state_.intruder;
  if (loop_.empty()) return e;
  if (!leg_) leg_ = Leg{shortest_path(plan_->polygon, e, loop_[loop_index_]), 0.0};
  leg_->s = std::min(leg_->s + budget, leg_->path.total_length);
  const Point next = leg_->path.at_length(leg_->s);
  if (leg_->s >= leg_->path.total_length) {
    loop_index_ = (loop_index_ + 1) % loop_.size();
    leg_.reset();
  }
  return next;
}

Point Simulator::move_intruder() {
  const Point e = state_.intruder;
  const double step = config_.v_e * config_.dt;
  if (step <= 0.0 && config_.policy != Policy::steer) return e;

  switch (config_.policy) {
    case Policy::random_walk: {
      heading_ += uniform() - 0.5;
      for (int attempt = 0; attempt < 16; ++attempt) {
        const Point to = e + step * Point(std::cos(heading_), std::sin(heading_));
        if (valid_move(e, to)) return to;
        heading_ = 2.0 * std::numbers::pi * uniform();
      }
      return e;
    }
    case Policy::greedy_escape: {
      // Chase the closest point tucked behind a reflex corner as seen from the
      // guard in charge, preferring corners that already hide it.
      const std::size_t owner = state_.responsible.empty() ? 0 : state_.responsible.front();
      const Point g = state_.guards.empty() ? e : state_.guards[owner];
      const SimplePolygon& P = plan_->polygon;
      const double reach = 0.05 * P.diameter();
      Point goal = e;
      double best = std::numeric_limits<double>::infinity();
      bool best_hidden = false;
      for (std::size_t i : P.reflex_vertices()) {
        const Point d = P[i] - g;
        if (d.norm() <= eps()) continue;
        const Point u = d.normalized();
        const double room = ray_exit(P, P[i], u);
        if (room <= eps()) continue;
        const Point h = P[i] + std::min(reach, 0.5 * room) * u;
        const bool hidden = !segment_visible(P, g, h);
        const double dist = (h - e).norm();
        if ((hidden && !best_hidden) || (hidden == best_hidden && dist < best)) {
          best = dist;
          goal = h;
          best_hidden = hidden;
        }
      }
      Point pick = e;
      double score = (goal - e).norm(), away = (e - g).norm();
      for (int k = 0; k < 32; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / 32.0;
        const Point to = e + step * Point(std::cos(angle), std::sin(angle));
        if (!valid_move(e, to)) continue;
        const double s = (goal - to).norm(), a = (to - g).norm();
        if (s < score - 1e-12 || (std::abs(s - score) <= 1e-12 && a > away)) {
          pick = to;
          score = s;
          away = a;
        }
      }
      return pick;
    }
    case Policy::corner_rush:
    case Policy::scripted:
      return follow_waypoints(step);
    case Policy::steer: {
      const Point to = e + config_.v_e * config_.dt * steer_;
      return valid_move(e, to) ? to : e;
    }
  }
  return e;
}

void Simulator::update_guards(const Point& e, std::optional<std::size_t> e_cell) {
  const double budget = config_.v_p * config_.dt;
  for (std::size_t a = 0; a < plan_->assignments.size(); ++a) {
    const GuardAssignment& g = plan_->assignments[a];
    if (!g.mobile) continue;
    const GuardTarget t = target_for(a, e, e_cell);
    MobileGuard& mg = mobile_[a];
    double left = budget;
    if (mg.spoke != t.spoke && mg.s > 0.0) {
      // back to the hub before switching spokes
      const double d = std::min(left, mg.s);
      mg.s -= d;
      left -= d;
    }
    if (mg.s <= 0.0) {
      mg.s = 0.0;
      mg.spoke = t.spoke;
    }
    if (mg.spoke == t.spoke) {
      const double gap = t.s - mg.s;
      mg.s += std::clamp(gap, -left, left);
    }
    state_.guards[a] = g.mobile->road_map.at(mg.spoke, mg.s);
    state_.active_zone[a] = t.s > 0.0 ? t.zone : std::nullopt;
  }
}

void Simulator::evaluate(std::optional<std::size_t> previous_cell) {
  state_.responsible.clear();
  if (cell_) state_.responsible.push_back(*cell_);
  if (previous_cell && previous_cell != cell_) state_.responsible.push_back(*previous_cell);
  state_.visible = false;
  for (std::size_t a : state_.responsible)
    if (segment_visible(plan_->polygon, state_.guards[a], state_.intruder)) state_.visible = true;
}

const SimState& Simulator::step() {
  const std::optional<std::size_t> previous = cell_;
  const auto& events = config_.steer_events;
  for (; steer_cursor_ < events.size() && events[steer_cursor_].step <= state_.step; ++steer_cursor_)
    set_steer(events[steer_cursor_].heading, events[steer_cursor_].magnitude);
  state_.intruder = move_intruder();
  if (auto c = cell_of(state_.intruder)) cell_ = c;
  update_guards(state_.intruder, cell_);
  ++state_.step;
  state_.t = state_.step * config_.dt;
  evaluate(previous);
  return state_;
}

SimTrace run(const DeploymentPlan& plan, const SimConfig& config) {
  Simulator sim(plan, config);
  SimTrace trace;
  trace.config = sim.config();
  trace.states.reserve(static_cast<std::size_t>(config.steps) + 1);
  trace.states.push_back(sim.state());
  for (int k = 0; k < config.steps; ++k) trace.states.push_back(sim.step());
  for (const SimState& s : trace.states)
    if (!s.visible) trace.breach_steps.push_back(s.step);
  return trace;
}

}  // namespace guardsim
