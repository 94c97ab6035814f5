#pragma once
// Recursive cutting of a polygon into 6..9-edge pieces, the guard budget, and
// the nonagon pentagon/hexagon split.

#include "guardsim/geometry.hpp"
#include "guardsim/triangulation.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace guardsim {

enum class PartitionKind { hexagon, septagon, octagon, nonagon, remainder, quad_group };

std::string_view to_string(PartitionKind kind);
PartitionKind kind_for_edges(std::size_t edges);

struct Partition {
  /// Vertices in the parent polygon's order; flat vertices are kept.
  SimplePolygon polygon;
  /// Index of every vertex in the parent polygon.
  std::vector<std::size_t> vertex_ids;
  /// Edges that are edges of the parent polygon (k_i).
  int original_edges = 0;
  /// Edges that are cut diagonals (k-hat_i).
  int diagonal_edges = 0;
  PartitionKind kind = PartitionKind::hexagon;

  int edge_count() const { return original_edges + diagonal_edges; }
};

struct CutStep {
  Diagonal diagonal;  // parent polygon indices
  int side_edge_count = 0;
  std::size_t ear_start = 0;
  /// The cut came from the either-side fallback rather than the smaller side.
  bool fallback = false;
};

struct PartitionSet {
  SimplePolygon polygon;
  std::vector<Partition> partitions;
  std::vector<Diagonal> cut_diagonals;
  std::vector<CutStep> steps;
  /// Pairs of partitions sharing a cut diagonal (a tree).
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;

  /// Number of 6..9-edge partitions.
  int r() const;
  std::optional<std::size_t> remainder() const;
  /// Edge count of the remainder (k'), 0 when absent.
  int remainder_edges() const;
};

PartitionSet minimal_partition(const SimplePolygon& polygon);

/// Builds a partition set from pieces given as parent-index rings.
PartitionSet make_partition_set(const SimplePolygon& polygon, const std::vector<std::vector<std::size_t>>& pieces);

struct EdgeAccounting {
  int n = 0;
  int r = 0;
  int k_prime = 0;
  /// Sum of k_i + k-hat_i over the non-remainder partitions.
  int sum = 0;

  /// n + 2(r-1) - k' as printed with the guard-count proposition.
  int printed_form() const { return n + 2 * (r - 1) - k_prime; }
  /// Every cut diagonal is shared by two pieces: n + 2(pieces - 1) - k'.
  int exact_form() const { return n + 2 * (r + (k_prime > 0 ? 1 : 0) - 1) - k_prime; }
};

EdgeAccounting edge_accounting(const PartitionSet& set);

struct GuardBudget {
  int total = 0;
  int bound = 0;
  bool satisfies = false;
};

/// total = sum of guards (+1 when a remainder exists), bound = floor(n/3).
GuardBudget guard_budget(const PartitionSet& set, const std::vector<int>& per_partition_guards);

struct NonagonSplit {
  SimplePolygon pentagon;
  SimplePolygon hexagon;
  /// Indices into the nonagon.
  std::vector<std::size_t> pentagon_ids;
  std::vector<std::size_t> hexagon_ids;
  Diagonal diagonal;
};

/// Every split of a 9-gon by a diagonal with exactly four edges on one side,
/// in scan order. Throws NotANonagon unless the polygon has nine edges.
std::vector<NonagonSplit> nonagon_splits(const SimplePolygon& polygon);
NonagonSplit nonagon_split(const SimplePolygon& polygon);

}  // namespace guardsim
