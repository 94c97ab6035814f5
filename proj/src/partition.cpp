#include "guardsim/partition.hpp"

#include "guardsim/error.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace guardsim {

std::string_view to_string(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::hexagon: return "hexagon";
    case PartitionKind::septagon: return "septagon";
    case PartitionKind::octagon: return "octagon";
    case PartitionKind::nonagon: return "nonagon";
    case PartitionKind::remainder: return "remainder";
    case PartitionKind::quad_group: return "quad_group";
  }
  return "remainder";
}

PartitionKind kind_for_edges(std::size_t edges) {
  switch (edges) {
    case 6: return PartitionKind::hexagon;
    case 7: return PartitionKind::septagon;
    case 8: return PartitionKind::octagon;
    case 9: return PartitionKind::nonagon;
    default: return PartitionKind::remainder;
  }
}

int PartitionSet::r() const {
  return static_cast<int>(std::count_if(partitions.begin(), partitions.end(),
                                        [](const Partition& p) { return p.kind != PartitionKind::remainder; }));
}

std::optional<std::size_t> PartitionSet::remainder() const {
  for (std::size_t i = 0; i < partitions.size(); ++i)
    if (partitions[i].kind == PartitionKind::remainder) return i;
  return std::nullopt;
}

int PartitionSet::remainder_edges() const {
  const auto rem = remainder();
  return rem ? partitions[*rem].edge_count() : 0;
}

namespace {

std::vector<Point> coords(const SimplePolygon& polygon, const std::vector<std::size_t>& ids) {
  std::vector<Point> out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(polygon[id]);
  return out;
}

// Vertices a..b walking forward around `ring` (inclusive).
std::vector<std::size_t> chain(const std::vector<std::size_t>& ring, std::size_t a, std::size_t b) {
  std::vector<std::size_t> out;
  for (std::size_t i = a;; i = (i + 1) % ring.size()) {
    out.push_back(ring[i]);
    if (i == b) break;
  }
  return out;
}

Partition make_partition(const SimplePolygon& parent, std::vector<std::size_t> ids) {
  Partition part;
  const std::size_t n = parent.size();
  part.polygon = SimplePolygon(coords(parent, ids), SimplePolygon::Check::preserve);
  if (part.polygon.was_reversed()) std::reverse(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t a = ids[i];
    const std::size_t b = ids[(i + 1) % ids.size()];
    if ((a + 1) % n == b) {
      ++part.original_edges;
    } else {
      ++part.diagonal_edges;
    }
  }
  part.vertex_ids = std::move(ids);
  part.kind = kind_for_edges(part.vertex_ids.size());
  return part;
}

// Edges of a parent-index ring that are not edges of the parent polygon.
int cut_edges(std::size_t n, const std::vector<std::size_t>& ids) {
  int count = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const std::size_t a = ids[k], b = ids[(k + 1) % ids.size()];
    if ((a + 1) % n != b && (b + 1) % n != a) ++count;
  }
  return count;
}

bool has_edge(const std::vector<std::size_t>& ids, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t x = ids[i], y = ids[(i + 1) % ids.size()];
    if ((x == a && y == b) || (x == b && y == a)) return true;
  }
  return false;
}

void link_partitions(PartitionSet& set) {
  set.adjacency.clear();
  for (const Diagonal& d : set.cut_diagonals) {
    std::vector<std::size_t> owners;
    for (std::size_t k = 0; k < set.partitions.size(); ++k)
      if (has_edge(set.partitions[k].vertex_ids, d.first, d.second)) owners.push_back(k);
    if (owners.size() == 2) set.adjacency.emplace_back(owners[0], owners[1]);
  }
}

}  // namespace

PartitionSet make_partition_set(const SimplePolygon& polygon, const std::vector<std::vector<std::size_t>>& pieces) {
  PartitionSet set;
  set.polygon = polygon;
  const std::size_t n = polygon.size();
  std::map<Diagonal, int> seen;
  for (const auto& ids : pieces) {
    set.partitions.push_back(make_partition(polygon, ids));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t a = ids[i], b = ids[(i + 1) % ids.size()];
      if ((a + 1) % n == b || (b + 1) % n == a) continue;
      if (seen[{std::min(a, b), std::max(a, b)}]++ == 0) set.cut_diagonals.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  link_partitions(set);
  return set;
}

PartitionSet minimal_partition(const SimplePolygon& polygon) {
  PartitionSet set;
  set.polygon = polygon;
  std::vector<std::size_t> current(polygon.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;

  while (current.size() >= 10) {
    const std::size_t m = current.size();
    const SimplePolygon piece(coords(polygon, current), SimplePolygon::Check::preserve);
    std::optional<BalancedCut> cut;
    std::vector<std::size_t> off, keep;
    std::size_t used_start = 0;
    bool fallback = false;
    int best_score = 0;
    // Smaller-side cuts never leave a remainder, so every ear-clipping
    // rotation is tried for one before settling for either side. Among
    // rotations, prefer cuts that keep the pieces chained (at most two cut
    // diagonals per piece, at most one on the part still to be cut).
    for (int pass = 0; pass < 2 && !cut; ++pass) {
      for (std::size_t start = 0; start < m; ++start) {
        const Triangulation t = triangulate(piece, start);
        const auto found = pass == 0 ? balanced_diagonal(t) : any_side_diagonal(t);
        if (!found) continue;
        const auto [i, j] = found->diagonal;
        std::vector<std::size_t> inner = chain(current, i, j);
        std::vector<std::size_t> outer = chain(current, j, i);
        if (!found->inner_side) std::swap(inner, outer);
        const int off_diagonals = cut_edges(polygon.size(), inner);
        const int keep_diagonals = cut_edges(polygon.size(), outer);
        const int keep_limit = outer.size() >= 10 ? 1 : 2;
        const int score = (off_diagonals > 2 ? 2 : 0) + (keep_diagonals > keep_limit ? 1 : 0);
        if (!cut || score < best_score) {
          cut = found;
          off = std::move(inner);
          keep = std::move(outer);
          used_start = start;
          fallback = pass == 1;
          best_score = score;
        }
        if (score == 0) break;
      }
    }
    if (!cut) {
      throw Error(ErrorKind::deployment_failed, "no-balanced-diagonal",
                  "no triangulation of a " + std::to_string(m) + "-vertex piece has a 5..8-edge diagonal");
    }
    const auto [i, j] = cut->diagonal;

    const Diagonal d{std::min(current[i], current[j]), std::max(current[i], current[j])};
    set.cut_diagonals.push_back(d);
    set.steps.push_back(CutStep{d, cut->side_edge_count, used_start, fallback});
    set.partitions.push_back(make_partition(polygon, off));
    current = keep;
  }
  set.partitions.push_back(make_partition(polygon, current));
  link_partitions(set);
  return set;
}

EdgeAccounting edge_accounting(const PartitionSet& set) {
  EdgeAccounting acc;
  acc.n = static_cast<int>(set.polygon.size());
  acc.r = set.r();
  acc.k_prime = set.remainder_edges();
  for (const Partition& p : set.partitions)
    if (p.kind != PartitionKind::remainder) acc.sum += p.edge_count();
  return acc;
}

GuardBudget guard_budget(const PartitionSet& set, const std::vector<int>& per_partition_guards) {
  GuardBudget budget;
  for (std::size_t k = 0; k < set.partitions.size(); ++k) {
    if (set.partitions[k].kind == PartitionKind::remainder) continue;
    budget.total += k < per_partition_guards.size() ? per_partition_guards[k] : 1;
  }
  if (set.remainder()) budget.total += 1;
  budget.bound = static_cast<int>(set.polygon.size()) / 3;
  budget.satisfies = budget.total < budget.bound;
  return budget;
}

std::vector<NonagonSplit> nonagon_splits(const SimplePolygon& polygon) {
  if (polygon.size() != 9) {
    throw Error(ErrorKind::not_a_nonagon, "not-a-nonagon",
                "expected 9 edges, got " + std::to_string(polygon.size()));
  }
  std::vector<NonagonSplit> out;
  // The 4-edge side of diagonal (a, a+4) is the pentagon.
  for (std::size_t a = 0; a < 9; ++a) {
    const std::size_t b = (a + 4) % 9;
    if (!is_diagonal(polygon, a, b)) continue;
    NonagonSplit split;
    for (std::size_t k = a;; k = (k + 1) % 9) {
      split.pentagon_ids.push_back(k);
      if (k == b) break;
    }
    for (std::size_t k = b;; k = (k + 1) % 9) {
      split.hexagon_ids.push_back(k);
      if (k == a) break;
    }
    std::vector<Point> pent, hex;
    for (std::size_t k : split.pentagon_ids) pent.push_back(polygon[k]);
    for (std::size_t k : split.hexagon_ids) hex.push_back(polygon[k]);
    split.pentagon = SimplePolygon(pent, SimplePolygon::Check::preserve);
    split.hexagon = SimplePolygon(hex, SimplePolygon::Check::preserve);
    split.diagonal = {std::min(a, b), std::max(a, b)};
    out.push_back(std::move(split));
  }
  return out;
}

NonagonSplit nonagon_split(const SimplePolygon& polygon) {
  auto splits = nonagon_splits(polygon);
  if (splits.empty()) {
    throw Error(ErrorKind::deployment_failed, "no-nonagon-split", "no diagonal leaves exactly four edges on one side");
  }
  return std::move(splits.front());
}

}  // namespace guardsim
