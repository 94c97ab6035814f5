#include "guardsim/geometry.hpp"

#include "guardsim/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace guardsim {

double eps() {
  static const double value = [] {
    if (const char* env = std::getenv("GUARDSIM_EPS")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && std::isfinite(v) && v > 0.0) return v;
    }
    return 1e-9;
  }();
  return value;
}

// ---------------------------------------------------------------------------
// Segments and rays

double project(const Segment& s, const Point& p) {
  const Point d = s.b - s.a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return 0.0;
  return std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
}

Point closest_point(const Segment& s, const Point& p) { return s.at(project(s, p)); }

double distance(const Point& p, const Segment& s) { return (p - closest_point(s, p)).norm(); }

namespace {

bool proper_crossing(const Segment& s, const Segment& t) {
  const double o1 = orient(s.a, s.b, t.a);
  const double o2 = orient(s.a, s.b, t.b);
  const double o3 = orient(t.a, t.b, s.a);
  const double o4 = orient(t.a, t.b, s.b);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

}  // namespace

double distance(const Segment& s, const Segment& t) {
  if (proper_crossing(s, t)) return 0.0;
  return std::min({distance(s.a, t), distance(s.b, t), distance(t.a, s), distance(t.b, s)});
}

bool segments_touch(const Segment& s, const Segment& t) { return distance(s, t) <= eps(); }

Ray::Ray(const Point& origin, const Point& direction) : origin_(origin) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::degenerate_input, "zero-direction", "ray direction must be nonzero");
  }
  direction_ = direction / n;
}

double Ray::distance(const Point& p) const {
  const double t = std::max(0.0, (p - origin_).dot(direction_));
  return (p - at(t)).norm();
}

// ---------------------------------------------------------------------------
// Rings

double signed_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * twice;
}

Point ring_centroid(std::span<const Point> ring) {
  const double a = signed_area(ring);
  if (std::abs(a) <= std::numeric_limits<double>::min()) {
    Point mean = Point::Zero();
    for (const Point& p : ring) mean += p;
    return ring.empty() ? mean : Point(mean / double(ring.size()));
  }
  Point c = Point::Zero();
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    c += (p + q) * cross(p, q);
  }
  return c / (6.0 * a);
}

double distance_to_boundary(std::span<const Point> ring, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
    best = std::min(best, distance(p, Segment{ring[i], ring[(i + 1) % n]}));
  }
  return best;
}

bool ring_contains(std::span<const Point> ring, const Point& p) {
  if (ring.size() < 3) return false;
  if (distance_to_boundary(ring, p) <= eps()) return true;
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

bool rings_touch(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) return false;
  if (ring_contains(a, b[0]) || ring_contains(b, a[0])) return true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Segment s{a[i], a[(i + 1) % a.size()]};
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_touch(s, Segment{b[j], b[(j + 1) % b.size()]})) return true;
    }
  }
  return false;
}

std::vector<Point> clean_ring(std::vector<Point> ring, double tolerance) {
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() >= 3;) {
      const std::size_t n = ring.size();
      const Point& prev = ring[(i + n - 1) % n];
      const Point& cur = ring[i];
      const Point& next = ring[(i + 1) % n];
      bool drop = (cur - next).norm() <= tolerance;
      if (!drop) {
        const double base = (next - prev).norm();
        drop = base <= tolerance || std::abs(orient(prev, cur, next)) <= tolerance * base;
      }
      if (drop) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }
  if (ring.size() < 3) ring.clear();
  return ring;
}

std::vector<Point> clip_left(std::span<const Point> ring, const Point& a, const Point& b) {
  std::vector<Point> out;
  const std::size_t n = ring.size();
  if (n == 0) return out;
  const double scale = (b - a).norm();
  auto side = [&](const Point& p) { return orient(a, b, p) / scale; };
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    const double sp = side(p);
    const double sq = side(q);
    if (sp >= 0.0) out.push_back(p);
    if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
      out.push_back(p + (sp / (sp - sq)) * (q - p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SimplePolygon

SimplePolygon::SimplePolygon(std::vector<Point> vertices, Check check) {
  for (const Point& p : vertices) {
    if (!p.allFinite()) throw Error(ErrorKind::degenerate_polygon, "non-finite", "vertex has a non-finite coordinate");
  }
  const double tol = eps();
  if (check == Check::lenient) {
    vertices = clean_ring(std::move(vertices), tol);
    if (vertices.size() < 3) {
      throw Error(ErrorKind::degenerate_polygon, "too-few-vertices", "derived ring collapsed");
    }
  } else {
    if (vertices.size() < 3) {
      throw Error(ErrorKind::degenerate_polygon, "too-few-vertices", "a polygon needs at least 3 vertices");
    }
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& prev = vertices[(i + n - 1) % n];
      const Point& cur = vertices[i];
      const Point& next = vertices[(i + 1) % n];
      if ((cur - next).norm() <= tol) {
        throw Error(ErrorKind::degenerate_polygon, "duplicate-vertex",
                    "consecutive vertices " + std::to_string(i) + " and " + std::to_string((i + 1) % n) + " coincide");
      }
      if (check == Check::strict && std::abs(orient(prev, cur, next)) <= tol * (next - prev).norm()) {
        throw Error(ErrorKind::degenerate_polygon, "collinear",
                    "vertex " + std::to_string(i) + " is collinear with its neighbours");
      }
    }
  }

  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment e{vertices[i], vertices[(i + 1) % n]};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_touch(e, Segment{vertices[j], vertices[(j + 1) % n]})) {
        throw Error(ErrorKind::degenerate_polygon, "not-simple",
                    "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }

  double a = signed_area(vertices);
  if (std::abs(a) <= tol) throw Error(ErrorKind::degenerate_polygon, "zero-area", "polygon has no area");
  if (a < 0.0) {
    std::reverse(vertices.begin(), vertices.end());
    a = -a;
    reversed_ = true;
  }
  vertices_ = std::move(vertices);
  area_ = a;
  reflex_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices_[prev(i)];
    const Point& c = vertices_[next(i)];
    reflex_[i] = orient(a, vertices_[i], c) < -tol * (c - a).norm();
  }
}

std::vector<std::size_t> SimplePolygon::reflex_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (reflex_[i]) out.push_back(i);
  return out;
}

double SimplePolygon::interior_angle(std::size_t i) const {
  const Point a = vertices_[next(i)] - vertices_[i];
  const Point b = vertices_[prev(i)] - vertices_[i];
  double angle = std::atan2(cross(a, b), a.dot(b));
  if (angle <= 0.0) angle += 2.0 * std::numbers::pi;
  return angle;
}

double SimplePolygon::perimeter() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += edge(i).length();
  return total;
}

Point SimplePolygon::centroid() const { return ring_centroid(vertices_); }

double SimplePolygon::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, (vertices_[i] - vertices_[j]).norm());
  return best;
}

Eigen::AlignedBox2d SimplePolygon::bounds() const {
  Eigen::AlignedBox2d box;
  for (const Point& p : vertices_) box.extend(p);
  return box;
}

// ---------------------------------------------------------------------------
// PolyPath

PolyPath PolyPath::through(std::vector<Point> waypoints) {
  PolyPath path;
  for (Point& p : waypoints) {
    if (!path.waypoints.empty() && (path.waypoints.back() - p).norm() <= eps()) continue;
    path.waypoints.push_back(std::move(p));
  }
  for (std::size_t i = 1; i < path.waypoints.size(); ++i)
    path.total_length += (path.waypoints[i] - path.waypoints[i - 1]).norm();
  return path;
}

Point PolyPath::at_length(double s) const {
  if (waypoints.empty()) return Point::Zero();
  if (s <= 0.0) return waypoints.front();
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double len = (waypoints[i] - waypoints[i - 1]).norm();
    if (s <= len) return waypoints[i - 1] + (len > 0.0 ? s / len : 0.0) * (waypoints[i] - waypoints[i - 1]);
    s -= len;
  }
  return waypoints.back();
}

double PolyPath::locate(const Point& p) const {
  if (waypoints.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double offset = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Segment seg{waypoints[i - 1], waypoints[i]};
    const double t = project(seg, p);
    const double d = (seg.at(t) - p).norm();
    if (d < best) {
      best = d;
      best_s = offset + t * seg.length();
    }
    offset += seg.length();
  }
  return best_s;
}

PolyPath PolyPath::reversed() const {
  PolyPath out = *this;
  std::reverse(out.waypoints.begin(), out.waypoints.end());
  return out;
}

// ---------------------------------------------------------------------------
// Containment and line of sight

bool contains(const SimplePolygon& polygon, const Point& p) { return ring_contains(polygon.vertices(), p); }

double distance_to_boundary(const SimplePolygon& polygon, const Point& p) {
  return distance_to_boundary(std::span<const Point>(polygon.vertices()), p);
}

namespace {

// Parameters along the line origin + t*dir (dir unit) at which it meets the
// polygon boundary: proper crossings plus vertices lying on the line.
void boundary_hits(const SimplePolygon& polygon, const Point& origin, const Point& dir, std::vector<double>& ts) {
  const double tol = eps();
  const auto& v = polygon.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& c = v[i];
    const Point& d = v[(i + 1) % n];
    const double dc = cross(dir, c - origin);
    const double dd = cross(dir, d - origin);
    if (std::abs(dc) <= tol) ts.push_back((c - origin).dot(dir));
    if ((dc > tol && dd < -tol) || (dc < -tol && dd > tol)) {
      const Point x = c + (dc / (dc - dd)) * (d - c);
      ts.push_back((x - origin).dot(dir));
    }
  }
}

}  // namespace

bool segment_visible(const SimplePolygon& polygon, const Point& a, const Point& b) {
  if (!contains(polygon, a) || !contains(polygon, b)) return false;
  const double len = (b - a).norm();
  if (len <= eps()) return true;
  const Point dir = (b - a) / len;
  std::vector<double> ts{0.0, len};
  boundary_hits(polygon, a, dir, ts);
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double lo = std::max(ts[i - 1], 0.0);
    const double hi = std::min(ts[i], len);
    if (hi - lo <= 1e-12 * (1.0 + len)) continue;
    if (!contains(polygon, a + (0.5 * (lo + hi)) * dir)) return false;
  }
  return true;
}

double ray_exit(const SimplePolygon& polygon, const Point& origin, const Point& direction) {
  const Eigen::AlignedBox2d box = polygon.bounds();
  const double far = 2.0 * (box.diagonal().norm() + (origin - box.center()).norm()) + 1.0;
  std::vector<double> ts{0.0, far};
  boundary_hits(polygon, origin, direction, ts);
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double lo = ts[i - 1];
    const double hi = ts[i];
    if (hi <= 0.0) continue;
    const double start = std::max(lo, 0.0);
    if (hi - start <= 1e-12 * (1.0 + far)) continue;
    if (!contains(polygon, origin + (0.5 * (start + hi)) * direction)) return start;
  }
  return far;
}

// ---------------------------------------------------------------------------
// Visibility polygon (angular sweep over vertex directions)

SimplePolygon visibility_polygon(const SimplePolygon& polygon, const Point& q) {
  if (!contains(polygon, q)) {
    throw Error(ErrorKind::degenerate_input, "outside", "visibility origin lies outside the polygon");
  }
  const double tol = eps();
  const auto& v = polygon.vertices();
  const std::size_t n = v.size();

  // Where q sits on the boundary decides the start of the sweep.
  std::optional<Point> base;
  bool on_boundary = false;
  for (std::size_t i = 0; i < n && !base; ++i) {
    if ((v[i] - q).norm() <= tol) {
      base = v[polygon.next(i)] - q;
      on_boundary = true;
    }
  }
  for (std::size_t i = 0; i < n && !base; ++i) {
    if (distance(q, polygon.edge(i)) <= tol) {
      base = v[polygon.next(i)] - q;
      on_boundary = true;
    }
  }

  struct Event {
    double angle;
    Point dir;
    double dist;
  };
  std::vector<Event> events;
  for (const Point& p : v) {
    const Point d = p - q;
    const double len = d.norm();
    if (len <= tol) continue;
    events.push_back({0.0, d / len, len});
  }
  if (!base) base = events.front().dir;
  const Point b = base->normalized();
  for (Event& e : events) {
    double a = std::atan2(cross(b, e.dir), b.dot(e.dir));
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    if (a >= 2.0 * std::numbers::pi - 1e-13 && !on_boundary) a = 0.0;
    e.angle = a;
  }
  std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
    return x.angle < y.angle || (x.angle == y.angle && x.dist < y.dist);
  });

  // Group vertices that lie on the same ray from q.
  std::vector<std::vector<Event>> groups;
  for (const Event& e : events) {
    if (!groups.empty()) {
      const Point& d0 = groups.back().front().dir;
      if (std::abs(cross(d0, e.dir)) <= 1e-12 && d0.dot(e.dir) > 0.0) {
        groups.back().push_back(e);
        continue;
      }
    }
    groups.push_back({e});
  }

  std::vector<Point> ring;
  if (on_boundary) ring.push_back(q);
  const std::size_t g = groups.size();
  for (std::size_t k = 0; k < g; ++k) {
    const Point dir = groups[k].front().dir;
    const double exit = ray_exit(polygon, q, dir);
    std::vector<std::pair<double, Point>> pts;
    for (const Event& e : groups[k])
      if (e.dist <= exit + tol) pts.emplace_back(e.dist, q + e.dist * e.dir);
    if (exit > tol && (pts.empty() || exit > pts.back().first + tol)) pts.emplace_back(exit, q + exit * dir);
    if (pts.empty()) continue;

    // Order along the ray follows the side that is blocked closer.
    const double gap_prev = k > 0 ? groups[k].front().angle - groups[k - 1].front().angle : 1.0;
    const double gap_next = k + 1 < g ? groups[k + 1].front().angle - groups[k].front().angle : 1.0;
    const double delta = std::min(1e-7, 0.25 * std::min(gap_prev, gap_next));
    const double before = ray_exit(polygon, q, rotate(dir, -delta));
    const double after = ray_exit(polygon, q, rotate(dir, delta));
    if (before > after + tol) std::reverse(pts.begin(), pts.end());
    for (const auto& [d, p] : pts) ring.push_back(p);
  }
  return SimplePolygon(std::move(ring), SimplePolygon::Check::lenient);
}

// ---------------------------------------------------------------------------
// Geodesics

namespace {

PolyPath dijkstra_path(const std::vector<Point>& nodes, const std::vector<std::vector<double>>& w, std::size_t src,
                       std::size_t dst) {
  const std::size_t m = nodes.size();
  std::vector<double> dist(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(m, m);
  std::vector<bool> done(m, false);
  dist[src] = 0.0;
  for (std::size_t iter = 0; iter < m; ++iter) {
    std::size_t u = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!done[i] && (u == m || dist[i] < dist[u])) u = i;
    if (u == m || !std::isfinite(dist[u])) break;
    done[u] = true;
    for (std::size_t x = 0; x < m; ++x) {
      if (done[x] || !std::isfinite(w[u][x])) continue;
      if (dist[u] + w[u][x] < dist[x]) {
        dist[x] = dist[u] + w[u][x];
        parent[x] = u;
      }
    }
  }
  std::vector<Point> rev;
  for (std::size_t x = dst; x != m; x = parent[x]) {
    rev.push_back(nodes[x]);
    if (x == src) break;
  }
  std::reverse(rev.begin(), rev.end());
  return PolyPath::through(std::move(rev));
}

}  // namespace

PolyPath shortest_path(const SimplePolygon& polygon, const Point& a, const Point& b) {
  if ((a - b).norm() <= eps()) return PolyPath::through({a});
  if (segment_visible(polygon, a, b)) return PolyPath::through({a, b});
  std::vector<Point> nodes{a, b};
  for (std::size_t r : polygon.reflex_vertices()) nodes.push_back(polygon[r]);
  const std::size_t m = nodes.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> w(m, std::vector<double>(m, inf));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (segment_visible(polygon, nodes[i], nodes[j])) w[i][j] = w[j][i] = (nodes[i] - nodes[j]).norm();
  return dijkstra_path(nodes, w, 0, 1);
}

std::vector<std::vector<double>> reflex_geodesics(const SimplePolygon& polygon) {
  const auto reflex = polygon.reflex_vertices();
  const std::size_t m = reflex.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(m, std::vector<double>(m, inf));
  for (std::size_t i = 0; i < m; ++i) {
    d[i][i] = 0.0;
    for (std::size_t j = i + 1; j < m; ++j)
      if (segment_visible(polygon, polygon[reflex[i]], polygon[reflex[j]]))
        d[i][j] = d[j][i] = (polygon[reflex[i]] - polygon[reflex[j]]).norm();
  }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// ---------------------------------------------------------------------------
// Kernel

std::vector<Point> kernel(const SimplePolygon& polygon) {
  Eigen::AlignedBox2d box = polygon.bounds();
  const Point pad = Point::Constant(1.0 + box.diagonal().norm());
  box.extend(box.min() - pad);
  box.extend(box.max() + pad);
  std::vector<Point> ring{box.corner(Eigen::AlignedBox2d::BottomLeft), box.corner(Eigen::AlignedBox2d::BottomRight),
                          box.corner(Eigen::AlignedBox2d::TopRight), box.corner(Eigen::AlignedBox2d::TopLeft)};
  for (std::size_t i = 0; i < polygon.size() && !ring.empty(); ++i) {
    const Segment e = polygon.edge(i);
    ring = clip_left(ring, e.a, e.b);
  }
  ring = clean_ring(std::move(ring), eps());
  if (ring.size() < 3 || signed_area(ring) <= eps() * eps()) return {};
  return ring;
}

}  // namespace guardsim
