#include "guardsim/deploy.hpp"

#include "guardsim/error.hpp"

#include <algorithm>

namespace guardsim {

bool sees_all(const SimplePolygon& polygon, const Point& p) {
  if (!contains(polygon, p)) return false;
  const double seen = visibility_polygon(polygon, p).area();
  return std::abs(seen - polygon.area()) <= 1e-9 * polygon.area();
}

namespace {

Cell local_cell(const SimplePolygon& polygon) {
  Cell cell;
  cell.polygon = polygon;
  cell.vertex_ids.resize(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) cell.vertex_ids[i] = i;
  return cell;
}

std::optional<Point> static_point(const SimplePolygon& polygon) {
  const std::vector<Point> k = kernel(polygon);
  if (k.empty()) return std::nullopt;
  return ring_centroid(k);
}

// Cell ids are local to the piece; lift them to the deployed polygon.
void lift(std::vector<GuardAssignment>& out, const std::vector<std::size_t>& ids, std::size_t partition_id) {
  for (GuardAssignment& a : out) {
    a.partition_id = partition_id;
    for (std::size_t& v : a.cell.vertex_ids) v = ids.at(v);
  }
}

}  // namespace

std::vector<GuardAssignment> deploy_partition(const SimplePolygon& partition, double v_e) {
  GuardAssignment a;
  a.cell = local_cell(partition);
  if (const auto p = static_point(partition)) {
    a.mode = GuardMode::fixed;
    a.position = *p;
    return {a};
  }
  MobilePlan plan = plan_mobile(partition, v_e);
  a.position = plan.road_map.hub;
  // A kernel that degenerates to a segment or a point has no area, yet the
  // hub of a zero-length road map can still sit on it.
  if (plan.road_map.zero_length() && sees_all(partition, a.position)) return {a};
  a.mode = GuardMode::mobile;
  a.mobile = std::move(plan);
  return {a};
}

std::vector<GuardAssignment> deploy_nonagon(const SimplePolygon& partition, double v_e) {
  for (NonagonSplit& split : nonagon_splits(partition)) {
    const auto p = static_point(split.pentagon);
    if (!p) continue;
    GuardAssignment pent;
    pent.cell = Cell{split.pentagon, split.pentagon_ids};
    pent.position = *p;
    std::vector<GuardAssignment> out{pent};
    auto hex = deploy_partition(split.hexagon, v_e);
    lift(hex, split.hexagon_ids, 0);
    out.insert(out.end(), hex.begin(), hex.end());
    return out;
  }
  throw Error(ErrorKind::deployment_failed, "pentagon-not-star",
              "no pentagon/hexagon split of the nonagon has a star-shaped pentagon");
}

void finish_plan(DeploymentPlan& plan) {
  plan.global_v_star = 0.0;
  for (const GuardAssignment& a : plan.assignments) plan.global_v_star = std::max(plan.global_v_star, a.v_star());
  plan.guard_total = static_cast<int>(plan.assignments.size());
  plan.bound = static_cast<int>(plan.polygon.size()) / plan.divisor;
  plan.satisfies = plan.guard_total < plan.bound;
}

DeploymentPlan deploy_polygon(const SimplePolygon& polygon, double v_e) {
  DeploymentPlan plan;
  plan.polygon = polygon;
  plan.v_e = v_e;
  plan.divisor = 3;
  plan.partition_set = minimal_partition(polygon);
  const PartitionSet& ps = plan.partition_set;

  std::vector<int> per_partition;
  for (std::size_t k = 0; k < ps.partitions.size(); ++k) {
    const Partition& part = ps.partitions[k];
    std::vector<GuardAssignment> guards = part.kind == PartitionKind::nonagon ? deploy_nonagon(part.polygon, v_e)
                                                                                : deploy_partition(part.polygon, v_e);
    lift(guards, part.vertex_ids, k);
    per_partition.push_back(static_cast<int>(guards.size()));
    plan.assignments.insert(plan.assignments.end(), guards.begin(), guards.end());
  }
  finish_plan(plan);
  const GuardBudget budget = guard_budget(ps, per_partition);
  plan.satisfies = budget.satisfies && budget.total == plan.guard_total;
  plan.hypotheses_hold = ps.remainder_edges() == 0 || ps.r() >= 3;
  return plan;
}

}  // namespace guardsim
