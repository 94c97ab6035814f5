#pragma once
// Discrete-time pursuit: an intruder moves under a policy while every mobile
// guard chases the road-map position its strategy prescribes.

#include "guardsim/deploy.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace guardsim {

enum class Policy { random_walk, greedy_escape, corner_rush, scripted, steer };

std::string_view to_string(Policy policy);
/// Throws ConfigInvalid for unknown names.
Policy parse_policy(std::string_view name);

/// Steering input that takes effect on the step leaving state `step`.
struct SteerEvent {
  int step = 0;
  Point heading = Point::Zero();
  double magnitude = 0.0;
};

struct SimConfig {
  /// 0 selects the largest admissible step.
  double dt = 0.0;
  double v_e = 1.0;
  double v_p = 1.0;
  int steps = 0;
  std::uint64_t seed = 42;
  Policy policy = Policy::random_walk;
  /// Loop of targets for the scripted policy.
  std::vector<Point> waypoints;
  std::optional<Point> start;
  /// Recorded steering for the steer policy, ordered by step.
  std::vector<SteerEvent> steer_events;
};

struct SimState {
  int step = 0;
  double t = 0.0;
  Point intruder = Point::Zero();
  /// One position per assignment of the plan.
  std::vector<Point> guards;
  std::vector<std::optional<std::size_t>> active_zone;
  /// Assignments whose cell holds the intruder now or held it one step ago.
  std::vector<std::size_t> responsible;
  bool visible = true;
};

struct SimTrace {
  SimConfig config;
  std::vector<SimState> states;
  std::vector<int> breach_steps;
};

/// Largest step keeping v_e * dt within a quarter of the smallest zone radius
/// and a fiftieth of the polygon's diameter. 1 when v_e = 0.
double max_dt(const DeploymentPlan& plan, double v_e);

/// Interior point used when the configuration gives no start.
Point default_start(const SimplePolygon& polygon);

/// Loop of points just past each reflex corner, beside both incident edges.
std::vector<Point> corner_rush_waypoints(const SimplePolygon& polygon);

class Simulator {
 public:
  /// Validates the configuration (ConfigInvalid) and places the guards at the
  /// targets for the start point.
  Simulator(const DeploymentPlan& plan, SimConfig config);

  const SimConfig& config() const { return config_; }
  const SimState& state() const { return state_; }

  /// Heading (normalized here) and magnitude in [0, 1] for the steer policy.
  void set_steer(const Point& heading, double magnitude);
  const SimState& step();
  void reset();

 private:
  struct Leg {
    PolyPath path;
    double s = 0.0;
  };
  struct MobileGuard {
    std::size_t spoke = 0;
    double s = 0.0;
  };

  std::optional<std::size_t> cell_of(const Point& p) const;
  GuardTarget target_for(std::size_t assignment, const Point& e, std::optional<std::size_t> e_cell) const;
  Point move_intruder();
  Point follow_waypoints(double budget);
  bool valid_move(const Point& from, const Point& to) const;
  double uniform();
  void update_guards(const Point& e, std::optional<std::size_t> e_cell);
  void evaluate(std::optional<std::size_t> previous_cell);

  const DeploymentPlan* plan_;
  SimConfig config_;
  std::vector<std::vector<std::size_t>> next_hop_;
  std::vector<Segment> shared_edge_;  // indexed a * cells + b
  std::vector<Point> hide_points_;
  std::vector<Point> loop_;
  std::mt19937_64 rng_;
  SimState state_;
  std::vector<MobileGuard> mobile_;
  std::optional<std::size_t> cell_;
  double heading_ = 0.0;
  Point steer_ = Point::Zero();
  std::size_t loop_index_ = 0;
  std::size_t steer_cursor_ = 0;
  std::optional<Leg> leg_;
};

/// Runs config.steps steps; the trace holds steps + 1 states.
SimTrace run(const DeploymentPlan& plan, const SimConfig& config);

}  // namespace guardsim
