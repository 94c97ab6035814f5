#include "guardsim/orthogonal.hpp"

#include "guardsim/error.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace guardsim {

bool is_orthogonal(const SimplePolygon& polygon) {
  if (polygon.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point d = polygon.edge(i).b - polygon.edge(i).a;
    if (std::abs(d.x()) > eps() && std::abs(d.y()) > eps()) return false;
  }
  return true;
}

namespace {

bool strictly_convex(const SimplePolygon& p, const Quad& q) {
  for (std::size_t k = 0; k < 4; ++k)
    if (orient(p[q[k]], p[q[(k + 1) % 4]], p[q[(k + 2) % 4]]) <= eps()) return false;
  return true;
}

bool is_rectangle(const SimplePolygon& p, const Quad& q) {
  for (std::size_t k = 0; k < 4; ++k) {
    const Point u = p[q[(k + 1) % 4]] - p[q[k]];
    const Point v = p[q[(k + 2) % 4]] - p[q[(k + 1) % 4]];
    if (std::abs(u.dot(v)) > eps() * (1.0 + u.norm() * v.norm())) return false;
  }
  return true;
}

bool is_edge(std::size_t n, std::size_t a, std::size_t b) { return (a + 1) % n == b || (b + 1) % n == a; }

void require_orthogonal(const SimplePolygon& polygon) {
  if (!is_orthogonal(polygon)) {
    throw Error(ErrorKind::not_orthogonal, "not-orthogonal",
                polygon.size() % 2 ? "odd vertex count" : "an edge is not axis-parallel");
  }
}

std::vector<Diagonal> shared_chords(std::size_t n, const std::vector<Quad>& quads) {
  std::vector<Diagonal> out;
  for (const Quad& q : quads)
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t a = q[k], b = q[(k + 1) % 4];
      if (!is_edge(n, a, b)) out.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

[[noreturn]] void quad_failure(const std::string& why) {
  throw Error(ErrorKind::quadrilateralization_failed, "quadrilateralization-failed", why);
}

}  // namespace

Quadrilateralization quadrilateralize(const SimplePolygon& polygon) {
  require_orthogonal(polygon);
  const std::size_t n = polygon.size();

  // ok[i][j]: i and j joined by a polygon edge or a proper diagonal.
  std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) ok[i][j] = ok[j][i] = is_edge(n, i, j) || is_diagonal(polygon, i, j);

  // cost[i][j] for the sub-polygon i..j closed by chord (i, j); j - i odd.
  // Value = number of non-rectangular quads, infinity when impossible.
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> cost(n, std::vector<int>(n, inf));
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> choice(n, std::vector<std::pair<std::size_t, std::size_t>>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) cost[i][i + 1] = 0;
  for (std::size_t span = 3; span < n; span += 2) {
    for (std::size_t i = 0; i + span < n; ++i) {
      const std::size_t j = i + span;
      if (!ok[i][j]) continue;
      for (std::size_t a = i + 1; a < j; a += 2) {
        if (!ok[i][a] || cost[i][a] >= inf) continue;
        for (std::size_t b = a + 1; b < j; b += 2) {
          if (!ok[a][b] || !ok[b][j] || cost[a][b] >= inf || cost[b][j] >= inf) continue;
          const Quad q{i, a, b, j};
          if (!strictly_convex(polygon, q)) continue;
          const int c = cost[i][a] + cost[a][b] + cost[b][j] + (is_rectangle(polygon, q) ? 0 : 1);
          if (c < cost[i][j]) {
            cost[i][j] = c;
            choice[i][j] = {a, b};
          }
        }
      }
    }
  }
  if (cost[0][n - 1] >= inf) quad_failure("no convex quadrilateralization on the polygon's own vertices");

  Quadrilateralization out;
  out.polygon = polygon;
  std::function<void(std::size_t, std::size_t)> emit = [&](std::size_t i, std::size_t j) {
    if (j == i + 1) return;
    const auto [a, b] = choice[i][j];
    out.quads.push_back(Quad{i, a, b, j});
    emit(i, a);
    emit(a, b);
    emit(b, j);
  };
  emit(0, n - 1);
  out.diagonals = shared_chords(n, out.quads);
  return out;
}

Quadrilateralization quadrilateralize(const SimplePolygon& polygon, std::vector<Quad> quads) {
  require_orthogonal(polygon);
  const std::size_t n = polygon.size();
  if (quads.size() != n / 2 - 1) {
    quad_failure("expected " + std::to_string(n / 2 - 1) + " quads, got " + std::to_string(quads.size()));
  }
  double area = 0.0;
  std::map<Diagonal, int> uses;
  for (Quad& q : quads) {
    for (std::size_t v : q)
      if (v >= n) quad_failure("quad vertex index out of range");
    std::vector<Point> ring;
    for (std::size_t v : q) ring.push_back(polygon[v]);
    if (signed_area(ring) < 0) std::reverse(q.begin(), q.end());
    if (!strictly_convex(polygon, q)) quad_failure("quad is not strictly convex");
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t a = q[k], b = q[(k + 1) % 4];
      if (is_edge(n, a, b)) continue;
      if (!is_diagonal(polygon, a, b)) quad_failure("quad side is neither an edge nor a diagonal");
      ++uses[{std::min(a, b), std::max(a, b)}];
    }
    ring.clear();
    for (std::size_t v : q) ring.push_back(polygon[v]);
    area += signed_area(ring);
  }
  for (const auto& [d, count] : uses)
    if (count != 2) quad_failure("chord not shared by exactly two quads");
  if (std::abs(area - polygon.area()) > 1e-9 * polygon.area()) quad_failure("quads do not tile the polygon");

  Quadrilateralization out;
  out.polygon = polygon;
  out.quads = std::move(quads);
  out.diagonals = shared_chords(n, out.quads);
  return out;
}

bool QuadDualTree::is_tree() const {
  if (node_count == 0 || edges.size() + 1 != node_count) return false;
  std::vector<std::size_t> parent(node_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& [a, b] : edges) {
    const std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

std::size_t QuadDualTree::max_degree() const {
  std::size_t d = 0;
  for (const auto& adj : adjacency) d = std::max(d, adj.size());
  return d;
}

QuadDualTree quad_dual_tree(const Quadrilateralization& q) {
  QuadDualTree tree;
  tree.node_count = q.quads.size();
  tree.adjacency.resize(tree.node_count);
  std::map<Diagonal, std::vector<std::size_t>> owners;
  const std::size_t n = q.polygon.size();
  for (std::size_t k = 0; k < q.quads.size(); ++k)
    for (std::size_t s = 0; s < 4; ++s) {
      const std::size_t a = q.quads[k][s], b = q.quads[k][(s + 1) % 4];
      if (!is_edge(n, a, b)) owners[{std::min(a, b), std::max(a, b)}].push_back(k);
    }
  for (const auto& [d, who] : owners) {
    if (who.size() != 2) continue;
    tree.edges.emplace_back(std::min(who[0], who[1]), std::max(who[0], who[1]));
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  for (const auto& [a, b] : tree.edges) {
    tree.adjacency[a].push_back(b);
    tree.adjacency[b].push_back(a);
  }
  for (auto& adj : tree.adjacency) std::sort(adj.begin(), adj.end());
  return tree;
}

std::vector<std::size_t> merged_ring(const std::vector<Quad>& quads) {
  // Directed quad sides; a chord appears once in each direction and cancels.
  std::map<std::size_t, std::size_t> next;
  std::map<std::pair<std::size_t, std::size_t>, int> count;
  for (const Quad& q : quads)
    for (std::size_t k = 0; k < 4; ++k) ++count[{q[k], q[(k + 1) % 4]}];
  for (const auto& [e, c] : count)
    if (!count.contains({e.second, e.first})) next[e.first] = e.second;
  std::vector<std::size_t> ring;
  if (next.empty()) return ring;
  const std::size_t start = next.begin()->first;
  for (std::size_t v = start;;) {
    ring.push_back(v);
    v = next.at(v);
    if (v == start || ring.size() > next.size()) break;
  }
  return ring;
}

namespace {

QuadGroup make_group(const Quadrilateralization& q, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  QuadGroup g;
  std::vector<Quad> quads;
  for (std::size_t k : members) quads.push_back(q.quads[k]);
  g.quads = std::move(members);
  g.vertex_ids = merged_ring(quads);
  std::vector<Point> pts;
  for (std::size_t v : g.vertex_ids) pts.push_back(q.polygon[v]);
  g.polygon = SimplePolygon(pts, SimplePolygon::Check::preserve);
  return g;
}

// Nodes on b's side of the tree edge (a, b), restricted to `alive`.
std::vector<std::size_t> side_of(const QuadDualTree& tree, const std::vector<char>& alive, std::size_t a, std::size_t b) {
  std::vector<std::size_t> out{b}, stack{b};
  std::vector<char> seen(tree.node_count, 0);
  seen[a] = seen[b] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : tree.adjacency[v]) {
      if (seen[w] || !alive[w]) continue;
      seen[w] = 1;
      out.push_back(w);
      stack.push_back(w);
    }
  }
  return out;
}

}  // namespace

QuadGrouping quad_group(const Quadrilateralization& q) {
  const QuadDualTree tree = quad_dual_tree(q);
  QuadGrouping out;
  const std::size_t count = tree.node_count;
  if (count == 0) return out;

  if (tree.is_path()) {
    std::size_t start = 0;
    for (std::size_t k = 0; k < count; ++k)
      if (tree.adjacency[k].size() <= 1) {
        start = k;
        break;
      }
    std::vector<std::size_t> order{start};
    for (std::size_t prev = start, cur = start; order.size() < count;) {
      std::size_t nxt = cur;
      for (std::size_t w : tree.adjacency[cur])
        if (w != prev) nxt = w;
      prev = cur;
      cur = nxt;
      order.push_back(cur);
    }
    for (std::size_t k = 0; k < count; k += 3) {
      std::vector<std::size_t> run(order.begin() + k, order.begin() + std::min(count, k + 3));
      if (run.size() == 1) {
        out.leftover = run.front();
      } else {
        out.groups.push_back(make_group(q, run));
      }
    }
    return out;
  }

  std::vector<char> alive(count, 1);
  std::size_t remaining = count;
  while (remaining > 4) {
    std::vector<std::size_t> best;
    for (const auto& [a, b] : tree.edges) {
      if (!alive[a] || !alive[b]) continue;
      for (int flip = 0; flip < 2; ++flip) {
        auto side = flip ? side_of(tree, alive, b, a) : side_of(tree, alive, a, b);
        if (side.size() >= 2 && (best.empty() || side.size() < best.size())) best = std::move(side);
      }
    }
    if (best.empty() || best.size() > 4) {
      throw Error(ErrorKind::quadrilateralization_failed, "grouping-failed",
                  "no subtree of 2..4 quads can be separated");
    }
    for (std::size_t k : best) alive[k] = 0;
    remaining -= best.size();
    out.groups.push_back(make_group(q, best));
  }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < count; ++k)
    if (alive[k]) rest.push_back(k);
  if (rest.size() == 1) {
    out.leftover = rest.front();
  } else {
    out.groups.push_back(make_group(q, rest));
  }
  return out;
}

DeploymentPlan deploy_orthogonal(const SimplePolygon& polygon, double v_e, const std::optional<std::vector<Quad>>& quads) {
  const Quadrilateralization q = quads ? quadrilateralize(polygon, *quads) : quadrilateralize(polygon);
  const QuadGrouping grouping = quad_group(q);

  OrthogonalSummary summary;
  summary.quads = q.quads;
  std::vector<std::vector<std::size_t>> pieces;
  for (const QuadGroup& g : grouping.groups) {
    summary.groups.push_back(g.quads);
    pieces.push_back(g.vertex_ids);
    if (g.quads.size() == 2) ++summary.n2;
    if (g.quads.size() == 3) ++summary.n3;
    if (g.quads.size() == 4) ++summary.n4;
  }
  if (grouping.leftover) {
    summary.leftover = *grouping.leftover;
    const Quad& lq = q.quads[*grouping.leftover];
    pieces.emplace_back(lq.begin(), lq.end());
  }

  DeploymentPlan plan;
  plan.polygon = polygon;
  plan.v_e = v_e;
  plan.divisor = 4;
  plan.partition_set = make_partition_set(polygon, pieces);
  for (std::size_t k = 0; k < plan.partition_set.partitions.size(); ++k) {
    Partition& part = plan.partition_set.partitions[k];
    part.kind = k < grouping.groups.size() ? PartitionKind::quad_group : PartitionKind::remainder;
    auto guards = deploy_partition(part.polygon, v_e);
    for (GuardAssignment& a : guards) {
      a.partition_id = k;
      for (std::size_t& v : a.cell.vertex_ids) v = part.vertex_ids.at(v);
    }
    plan.assignments.insert(plan.assignments.end(), guards.begin(), guards.end());
  }
  finish_plan(plan);
  plan.hypotheses_hold = summary.hypotheses_hold();
  plan.orthogonal = std::move(summary);
  return plan;
}

}  // namespace guardsim
