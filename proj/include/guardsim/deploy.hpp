#pragma once
// Per-partition guard assignment and the whole-polygon deployment plan.

#include "guardsim/partition.hpp"
#include "guardsim/starzones.hpp"

#include <array>
#include <optional>
#include <vector>

namespace guardsim {

enum class GuardMode { fixed, mobile };

/// The region one guard is responsible for.
struct Cell {
  SimplePolygon polygon;
  /// Index of every cell vertex in the deployed polygon.
  std::vector<std::size_t> vertex_ids;
};

struct GuardAssignment {
  std::size_t partition_id = 0;
  Cell cell;
  GuardMode mode = GuardMode::fixed;
  /// Static guard position, or the hub of a mobile guard.
  Point position = Point::Zero();
  std::optional<MobilePlan> mobile;

  double v_star() const { return mobile ? mobile->bound.v_star : 0.0; }
};

/// Quad grouping of an orthogonal polygon and the counts behind its budget.
struct OrthogonalSummary {
  std::vector<std::array<std::size_t, 4>> quads;
  /// Quad indices of every group, then the leftover quad if any.
  std::vector<std::vector<std::size_t>> groups;
  std::optional<std::size_t> leftover;
  int n2 = 0, n3 = 0, n4 = 0;

  int quad_count() const { return static_cast<int>(quads.size()); }
  int group_count() const { return n2 + n3 + n4; }
  int k_prime() const { return leftover ? 1 : 0; }
  /// 2 n2 + 3 n3 + 4 n4 + k'.
  int grouped_quads() const { return 2 * n2 + 3 * n3 + 4 * n4 + k_prime(); }
  /// floor((r + 1) / 2) for r quads, which equals floor(n / 4).
  int floor_exact() const { return (quad_count() + 1) / 2; }
  /// Twice the half-integer identity: r + 1 = 2N + k' + 1 + n3 + 2 n4.
  bool doubled_identity_holds() const {
    return quad_count() + 1 == 2 * group_count() + k_prime() + 1 + n3 + 2 * n4;
  }
  /// N + k' + floor((n3 + 2 n4) / 2). Equal to floor_exact() when k' = 1; can
  /// fall one short when k' = 0 and n3 is odd.
  int floor_form() const { return group_count() + k_prime() + (n3 + 2 * n4) / 2; }
  bool hypotheses_hold() const { return n3 >= 2 || n4 >= 1; }
};

struct DeploymentPlan {
  SimplePolygon polygon;
  double v_e = 1.0;
  PartitionSet partition_set;
  std::vector<GuardAssignment> assignments;
  double global_v_star = 0.0;
  int guard_total = 0;
  int bound = 0;
  /// 3 for general polygons, 4 for orthogonal ones.
  int divisor = 3;
  bool satisfies = false;
  /// Whether the counting argument's hypotheses hold for this partition.
  bool hypotheses_hold = false;
  std::optional<OrthogonalSummary> orthogonal;
};

/// One guard for a piece with at most eight edges (or a merged quad group):
/// static at the kernel centroid when the piece is star-shaped, else mobile.
std::vector<GuardAssignment> deploy_partition(const SimplePolygon& partition, double v_e);

/// Pentagon/hexagon split: a static guard for a star-shaped pentagon half and
/// deploy_partition on the hexagon half.
std::vector<GuardAssignment> deploy_nonagon(const SimplePolygon& partition, double v_e);

DeploymentPlan deploy_polygon(const SimplePolygon& polygon, double v_e);

/// Recomputes global_v_star, guard_total, bound and satisfies from the
/// assignments.
void finish_plan(DeploymentPlan& plan);

/// True when the visibility polygon of p covers the polygon (relative area).
bool sees_all(const SimplePolygon& polygon, const Point& p);

}  // namespace guardsim
