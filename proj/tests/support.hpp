#pragma once
// Fixture loading and independent oracles. Nothing here calls into the
// library's geometry: containment, line of sight, geodesics and areas are
// recomputed from the raw vertex rings.

#include "guardsim/io.hpp"

#include <cstdint>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using guardsim::Point;
using Ring = std::vector<Point>;

inline std::filesystem::path fixture_dir() { return GUARDSIM_FIXTURES; }
inline std::filesystem::path data_dir() { return GUARDSIM_TEST_DATA; }

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir()))
    if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline guardsim::PolygonFile load(const std::string& name) {
  return guardsim::read_polygon_file(fixture_dir() / (name + ".json"));
}

inline double shoelace(const Ring& r) {
  double a = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Point& p = r[i];
    const Point& q = r[(i + 1) % r.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

inline double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * d - p).norm();
}

inline double boundary_distance(const Ring& r, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) best = std::min(best, segment_distance(p, r[i], r[(i + 1) % r.size()]));
  return best;
}

/// Even-odd crossing count, with no tolerance at all.
inline bool crossing_inside(const Ring& r, const Point& p) {
  bool in = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const Point& a = r[i];
    const Point& b = r[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

/// Inside or within `band` of the boundary.
inline bool inside_closed(const Ring& r, const Point& p, double band = 1e-9) {
  return boundary_distance(r, p) <= band || crossing_inside(r, p);
}

/// Every one of `samples` + 1 evenly spaced points of ab lies in the closed
/// polygon.
inline bool sampled_los(const Ring& r, const Point& a, const Point& b, int samples = 2000) {
  for (int k = 0; k <= samples; ++k)
    if (!inside_closed(r, a + (b - a) * (double(k) / samples))) return false;
  return true;
}

/// Dijkstra over the visibility graph of the endpoints and every vertex.
inline double geodesic_length(const Ring& r, const Point& a, const Point& b) {
  std::vector<Point> nodes{a, b};
  nodes.insert(nodes.end(), r.begin(), r.end());
  const std::size_t m = nodes.size();
  std::vector<double> dist(m, std::numeric_limits<double>::infinity());
  dist[0] = 0;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, 0});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == 1) return d;
    for (std::size_t v = 0; v < m; ++v) {
      if (v == u) continue;
      const double w = (nodes[v] - nodes[u]).norm();
      if (d + w >= dist[v]) continue;
      if (!sampled_los(r, nodes[u], nodes[v], 400)) continue;
      dist[v] = d + w;
      pq.push({dist[v], v});
    }
  }
  return dist[1];
}

/// Deterministic points in the bounding box.
inline std::vector<Point> box_samples(const Ring& r, int count, std::uint64_t seed = 7) {
  Point lo = r.front(), hi = r.front();
  for (const Point& p : r) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back({lo.x() + u(rng) * (hi.x() - lo.x()), lo.y() + u(rng) * (hi.y() - lo.y())});
  return out;
}

/// Points inside the polygon and at least `band` from its boundary.
inline std::vector<Point> interior_samples(const Ring& r, int count, double band = 1e-6, std::uint64_t seed = 7) {
  std::vector<Point> out;
  for (std::uint64_t round = 0; out.size() < std::size_t(count) && round < 100; ++round)
    for (const Point& p : box_samples(r, count, seed + round))
      if (out.size() < std::size_t(count) && crossing_inside(r, p) && boundary_distance(r, p) > band) out.push_back(p);
  return out;
}

/// min over a grid of (r1, r2) of max(d1/r1, d2/r2) * v_e under the caps
/// r1 <= c1, r2 <= c2, r1 + r2 <= c12.
inline double grid_speed(double d1, double d2, double c1, double c2, double c12, double v_e, double step = 1e-4) {
  double best = std::numeric_limits<double>::infinity();
  for (double r1 = step; r1 <= c1 + 1e-12; r1 += step) {
    const double r2 = std::min(c2, c12 - r1);
    if (r2 <= 0) continue;
    best = std::min(best, std::max(d1 / r1, d2 / r2) * v_e);
  }
  return best;
}

}  // namespace oracle
