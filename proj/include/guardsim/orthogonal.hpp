#pragma once
// Orthogonal polygons: convex quadrilateralization, its dual tree, grouping
// into 2..4-quad pieces, and the floor(n/4) deployment.

#include "guardsim/deploy.hpp"

#include <array>
#include <optional>
#include <vector>

namespace guardsim {

using Quad = std::array<std::size_t, 4>;

/// Axis-parallel edges and an even vertex count.
bool is_orthogonal(const SimplePolygon& polygon);

struct Quadrilateralization {
  SimplePolygon polygon;
  /// Counterclockwise vertex indices.
  std::vector<Quad> quads;
  /// Chords shared by two quads, (i, j) with i < j.
  std::vector<Diagonal> diagonals;
};

/// Interval DP over vertex chords; ties go to the lexicographically first
/// split, fewer non-rectangular quads preferred. Throws NotOrthogonal, or
/// QuadrilateralizationFailed when no convex quadrilateralization on the
/// polygon's vertices exists.
Quadrilateralization quadrilateralize(const SimplePolygon& polygon);

/// Validates a supplied quad list (orientation is normalized). Throws
/// QuadrilateralizationFailed naming the first problem.
Quadrilateralization quadrilateralize(const SimplePolygon& polygon, std::vector<Quad> quads);

struct QuadDualTree {
  std::size_t node_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> adjacency;

  bool is_tree() const;
  std::size_t max_degree() const;
  bool is_path() const { return max_degree() <= 2; }
};

QuadDualTree quad_dual_tree(const Quadrilateralization& q);

struct QuadGroup {
  std::vector<std::size_t> quads;
  /// Boundary ring of the merged quads, as polygon vertex indices.
  std::vector<std::size_t> vertex_ids;
  SimplePolygon polygon;
};

struct QuadGrouping {
  std::vector<QuadGroup> groups;
  std::optional<std::size_t> leftover;
};

/// A path-shaped dual tree is cut into runs of three consecutive quads; any
/// other tree by repeatedly separating the smallest subtree of at least two.
QuadGrouping quad_group(const Quadrilateralization& q);

/// Boundary ring of a union of quads sharing chords.
std::vector<std::size_t> merged_ring(const std::vector<Quad>& quads);

/// One guard per group, one for the leftover quad, bound floor(n/4).
/// `quads` overrides the built-in quadrilateralization when given.
DeploymentPlan deploy_orthogonal(const SimplePolygon& polygon, double v_e,
                                 const std::optional<std::vector<Quad>>& quads = std::nullopt);

}  // namespace guardsim
