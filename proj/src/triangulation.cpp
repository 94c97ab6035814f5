#include "guardsim/triangulation.hpp"

#include "guardsim/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace guardsim {

namespace {

bool adjacent(std::size_t i, std::size_t j, std::size_t n) { return (i + 1) % n == j || (j + 1) % n == i; }

bool is_ear(const SimplePolygon& polygon, const std::vector<std::size_t>& ring, std::size_t pos, bool relaxed) {
  const std::size_t m = ring.size();
  const std::size_t p = ring[(pos + m - 1) % m];
  const std::size_t i = ring[pos];
  const std::size_t q = ring[(pos + 1) % m];
  const Point& a = polygon[p];
  const Point& b = polygon[i];
  const Point& c = polygon[q];
  const double turn = orient(a, b, c);
  if (relaxed ? turn <= 0.0 : turn <= eps() * (c - a).norm()) return false;
  const std::array<Point, 3> tri{a, b, c};
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t v = ring[k];
    if (v == p || v == i || v == q) continue;
    const Point& x = polygon[v];
    if (relaxed) {
      if (orient(a, b, x) > 0 && orient(b, c, x) > 0 && orient(c, a, x) > 0) return false;
    } else if (ring_contains(tri, x)) {
      return false;
    }
  }
  return true;
}

}  // namespace

Triangulation triangulate(const SimplePolygon& polygon, std::size_t start) {
  const std::size_t n = polygon.size();
  Triangulation out;
  out.polygon = polygon;
  out.start = start % n;
  std::vector<std::size_t> ring(n);
  for (std::size_t k = 0; k < n; ++k) ring[k] = (out.start + k) % n;

  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    std::optional<std::size_t> ear;
    for (bool relaxed : {false, true}) {
      for (std::size_t k = 1; k <= m && !ear; ++k) {
        if (is_ear(polygon, ring, k % m, relaxed)) ear = k % m;
      }
      if (ear) break;
    }
    if (!ear) throw Error(ErrorKind::degenerate_polygon, "no-ear", "ear clipping found no ear");
    const std::size_t pos = *ear;
    const std::size_t p = ring[(pos + m - 1) % m];
    const std::size_t i = ring[pos];
    const std::size_t q = ring[(pos + 1) % m];
    out.triangles.push_back({p, i, q});
    if (!adjacent(p, q, n)) out.diagonals.emplace_back(std::min(p, q), std::max(p, q));
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  out.triangles.push_back({ring[0], ring[1], ring[2]});
  return out;
}

DualTree dual_tree(const Triangulation& t) {
  DualTree tree;
  tree.node_count = t.triangles.size();
  tree.adjacency.resize(tree.node_count);
  std::map<Diagonal, std::vector<std::size_t>> owners;
  for (std::size_t k = 0; k < t.triangles.size(); ++k) {
    const auto& tri = t.triangles[k];
    for (int e = 0; e < 3; ++e) {
      const std::size_t a = tri[e], b = tri[(e + 1) % 3];
      owners[{std::min(a, b), std::max(a, b)}].push_back(k);
    }
  }
  for (const Diagonal& d : t.diagonals) {
    const auto& own = owners.at(d);
    tree.edges.emplace_back(own.at(0), own.at(1));
    tree.adjacency[own[0]].push_back(own[1]);
    tree.adjacency[own[1]].push_back(own[0]);
  }
  return tree;
}

namespace {

// Polygon-edge counts on the child side of each dual edge, from a DFS rooted
// at triangle 0.
std::vector<int> subtree_edge_counts(const Triangulation& t, const DualTree& tree) {
  const std::size_t n = t.polygon.size();
  std::vector<int> own(tree.node_count, 0);
  for (std::size_t k = 0; k < tree.node_count; ++k) {
    const auto& tri = t.triangles[k];
    for (int e = 0; e < 3; ++e)
      if (adjacent(tri[e], tri[(e + 1) % 3], n)) ++own[k];
  }
  std::vector<int> total(tree.node_count, 0);
  std::vector<std::size_t> parent(tree.node_count, tree.node_count);
  std::function<int(std::size_t, std::size_t)> dfs = [&](std::size_t u, std::size_t from) {
    int sum = own[u];
    for (std::size_t v : tree.adjacency[u]) {
      if (v == from) continue;
      parent[v] = u;
      sum += dfs(v, u);
    }
    return total[u] = sum;
  };
  if (tree.node_count > 0) dfs(0, tree.node_count);

  std::vector<int> child_side(tree.edges.size(), 0);
  for (std::size_t k = 0; k < tree.edges.size(); ++k) {
    const auto [a, b] = tree.edges[k];
    child_side[k] = parent[b] == a ? total[b] : total[a];
  }
  return child_side;
}

std::optional<BalancedCut> scan(const Triangulation& t, bool smaller_only) {
  const int n = static_cast<int>(t.polygon.size());
  if (n < 10) {
    throw Error(ErrorKind::too_small, "too-small", "balanced diagonal needs at least 10 vertices");
  }
  const DualTree tree = dual_tree(t);
  const std::vector<int> child_side = subtree_edge_counts(t, tree);
  for (std::size_t k = 0; k < t.diagonals.size(); ++k) {
    const Diagonal& d = t.diagonals[k];
    const int inner = static_cast<int>(d.second - d.first);
    const int side = child_side[k];
    const int other = n - side;
    auto in_range = [](int c) { return c >= 5 && c <= 8; };
    int pick = -1;
    if (smaller_only) {
      if (in_range(std::min(side, other))) pick = std::min(side, other);
    } else if (in_range(std::min(side, other))) {
      pick = std::min(side, other);
    } else if (in_range(std::max(side, other))) {
      pick = std::max(side, other);
    }
    if (pick < 0) continue;
    return BalancedCut{d, k, pick, inner == pick};
  }
  return std::nullopt;
}

}  // namespace

std::optional<BalancedCut> balanced_diagonal(const Triangulation& t) { return scan(t, true); }

std::optional<BalancedCut> any_side_diagonal(const Triangulation& t) { return scan(t, false); }

bool is_diagonal(const SimplePolygon& polygon, std::size_t i, std::size_t j) {
  const std::size_t n = polygon.size();
  if (i == j || adjacent(i, j, n)) return false;
  const Segment d{polygon[i], polygon[j]};
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t f = polygon.next(e);
    if (e == i || e == j || f == i || f == j) continue;
    if (segments_touch(d, polygon.edge(e))) return false;
  }
  const Point mid = d.at(0.5);
  return contains(polygon, mid) && distance_to_boundary(polygon, mid) > eps();
}

}  // namespace guardsim
