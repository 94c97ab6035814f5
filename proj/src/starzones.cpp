#include "guardsim/starzones.hpp"

#include "guardsim/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace guardsim {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Geodesic distances from one source to every reflex vertex, then to any
// query point through its last visible reflex vertex.
class GeodesicField {
 public:
  GeodesicField(const SimplePolygon& cell, const Point& source) : cell_(cell), source_(source) {
    for (std::size_t r : cell.reflex_vertices()) nodes_.push_back(cell[r]);
    const std::size_t m = nodes_.size();
    dist_.assign(m, inf);
    parent_.assign(m, -1);
    std::vector<bool> done(m, false);
    for (std::size_t i = 0; i < m; ++i)
      if (segment_visible(cell, source, nodes_[i])) dist_[i] = (nodes_[i] - source).norm();
    std::vector<std::vector<double>> w(m, std::vector<double>(m, inf));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (segment_visible(cell, nodes_[i], nodes_[j])) w[i][j] = w[j][i] = (nodes_[i] - nodes_[j]).norm();
    for (std::size_t iter = 0; iter < m; ++iter) {
      std::size_t u = m;
      for (std::size_t i = 0; i < m; ++i)
        if (!done[i] && (u == m || dist_[i] < dist_[u])) u = i;
      if (u == m || !std::isfinite(dist_[u])) break;
      done[u] = true;
      for (std::size_t x = 0; x < m; ++x) {
        if (!done[x] && dist_[u] + w[u][x] < dist_[x]) {
          dist_[x] = dist_[u] + w[u][x];
          parent_[x] = static_cast<int>(u);
        }
      }
    }
  }

  double length_to(const Point& q) const { return best(q).first; }

  PolyPath path_to(const Point& q) const {
    const auto [len, via] = best(q);
    if (!std::isfinite(len)) return {};
    std::vector<Point> rev{q};
    for (int k = via; k >= 0; k = parent_[k]) rev.push_back(nodes_[k]);
    rev.push_back(source_);
    std::reverse(rev.begin(), rev.end());
    return PolyPath::through(std::move(rev));
  }

 private:
  std::pair<double, int> best(const Point& q) const {
    if (segment_visible(cell_, source_, q)) return {(q - source_).norm(), -1};
    double len = inf;
    int via = -1;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!std::isfinite(dist_[i])) continue;
      const double cand = dist_[i] + (q - nodes_[i]).norm();
      if (cand < len && segment_visible(cell_, nodes_[i], q)) {
        len = cand;
        via = static_cast<int>(i);
      }
    }
    return {len, via};
  }

  const SimplePolygon& cell_;
  Point source_;
  std::vector<Point> nodes_;
  std::vector<double> dist_;
  std::vector<int> parent_;
};

Point unit(const Point& v) { return v / v.norm(); }

bool edge_meets(const Region& region, const Segment& e) {
  if (region.contains(e.a) || region.contains(e.b)) return true;
  for (const auto& ring : region.rings)
    for (std::size_t i = 0; i < ring.size(); ++i)
      if (segments_touch(e, Segment{ring[i], ring[(i + 1) % ring.size()]})) return true;
  return false;
}

// Candidate end points inside a region for paths arriving from elsewhere.
std::vector<Point> region_candidates(const SimplePolygon& cell, const Region& region, double step) {
  std::vector<Point> out = region.vertices();
  for (std::size_t r : cell.reflex_vertices()) out.push_back(region.closest_point(cell[r]));
  if (step > 0.0) {
    const auto samples = region.boundary_samples(step);
    out.insert(out.end(), samples.begin(), samples.end());
  }
  out.push_back(region.anchor());
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Star regions

StarRegion star_region(const SimplePolygon& polygon, std::size_t v) {
  if (v >= polygon.size() || !polygon.is_reflex(v)) {
    throw Error(ErrorKind::not_reflex, "not-reflex", "vertex " + std::to_string(v) + " is not reflex");
  }
  const Point& c = polygon[v];
  const Point e1 = unit(c - polygon[polygon.prev(v)]);
  const Point e2 = unit(c - polygon[polygon.next(v)]);
  const double reach = 4.0 * polygon.diameter() + 1.0;
  const Region wedge = Region::of({c, c + reach * e1, c + reach * e2});
  const SimplePolygon view = visibility_polygon(polygon, c);
  return StarRegion{v, intersect(Region::of(view.vertices()), wedge)};
}

std::vector<StarRegion> star_regions(const SimplePolygon& polygon) {
  std::vector<StarRegion> out;
  for (std::size_t v : polygon.reflex_vertices()) out.push_back(star_region(polygon, v));
  return out;
}

Region star_intersection(const std::vector<StarRegion>& regions) {
  if (regions.empty()) return {};
  Region acc = regions.front().region;
  for (std::size_t i = 1; i < regions.size() && !acc.empty(); ++i) acc = intersect(acc, regions[i].region);
  return acc;
}

int MinEdgesReport::violations() const {
  int count = 0;
  for (const auto& p : per_reflex) count += p.ok ? 0 : 1;
  if (!star_count_ok) ++count;
  if (pentagon && !pentagon->ok) ++count;
  return count;
}

MinEdgesReport min_edges_check(const SimplePolygon& polygon) {
  MinEdgesReport report;
  const int n = static_cast<int>(polygon.size());
  report.n = n;
  const auto stars = star_regions(polygon);
  for (const StarRegion& s : stars) {
    MinEdgesReport::PerReflex entry;
    entry.vertex = s.owner_vertex;
    for (std::size_t e = 0; e < polygon.size(); ++e)
      if (!edge_meets(s.region, polygon.edge(e))) ++entry.non_intersecting;
    if (entry.non_intersecting >= 2) {
      entry.required = entry.non_intersecting + 3;
    } else if (entry.non_intersecting == 1) {
      entry.required = 5;
    }
    entry.ok = n >= entry.required;
    report.per_reflex.push_back(entry);
  }

  // Largest family of pairwise disjoint star regions, by brute force.
  const std::size_t m = stars.size();
  std::vector<std::vector<bool>> apart(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) apart[i][j] = apart[j][i] = !touches(stars[i].region, stars[j].region);
  std::size_t best_mask = 0;
  int best = 0;
  for (std::size_t mask = 1; m < 24 && mask < (std::size_t{1} << m); ++mask) {
    const int bits = std::popcount(mask);
    if (bits <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i)
      for (std::size_t j = i + 1; j < m && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && !apart[i][j]) ok = false;
    if (ok) {
      best = bits;
      best_mask = mask;
    }
  }
  report.disjoint_count = best;
  for (std::size_t i = 0; i < m; ++i)
    if (best_mask >> i & 1) report.disjoint_set.push_back(stars[i].owner_vertex);
  static constexpr int required[] = {0, 0, 6, 7, 9, 10};
  report.required_for_disjoint = best >= 2 && best <= 5 ? required[best] : 0;
  report.star_count_ok = n >= report.required_for_disjoint;

  if (n == 5 && stars.size() == 1 && report.per_reflex.front().non_intersecting == 2) {
    const std::size_t o = stars.front().owner_vertex;
    auto angle = [&](std::size_t k) { return polygon.interior_angle((o + k) % 5); };
    MinEdgesReport::PentagonAngles pa;
    pa.first_pair = angle(1) + angle(2);
    pa.second_pair = angle(3) + angle(4);
    pa.ok = pa.first_pair < std::numbers::pi && pa.second_pair < std::numbers::pi;
    report.pentagon = pa;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Paths between regions

PolyPath path_to_region(const SimplePolygon& cell, const Point& from, const Region& to) {
  if (to.contains(from)) return PolyPath::through({from});
  const Point q = to.closest_point(from);
  if (segment_visible(cell, from, q)) return PolyPath::through({from, q});
  const GeodesicField field(cell, from);
  double best = inf;
  Point target = q;
  for (const Point& c : region_candidates(cell, to, 0.0)) {
    const double len = field.length_to(c);
    if (len < best) {
      best = len;
      target = c;
    }
  }
  return field.path_to(target);
}

PolyPath region_path(const SimplePolygon& cell, const Region& from, const Region& to) {
  const Region common = intersect(from, to);
  if (!common.empty()) return PolyPath::through({common.anchor()});

  // Closest pair: a vertex of one region against the other region.
  double best = inf;
  Point bp = from.anchor(), bq = to.anchor();
  auto consider_pair = [&](const Point& p, const Point& q) {
    const double d = (p - q).norm();
    if (d < best) {
      best = d;
      bp = p;
      bq = q;
    }
  };
  for (const Point& p : from.vertices()) consider_pair(p, to.closest_point(p));
  for (const Point& q : to.vertices()) consider_pair(from.closest_point(q), q);
  if (segment_visible(cell, bp, bq)) return PolyPath::through({bp, bq});

  // Otherwise the path bends at reflex vertices; its ends are feet of the
  // first and last bend, or sampled boundary points.
  const double step = 1e-3 * cell.diameter();
  const std::vector<Point> targets = region_candidates(cell, to, 0.0);
  std::vector<Point> sources = region_candidates(cell, from, step);
  PolyPath best_path;
  double best_len = inf;
  for (const Point& p : sources) {
    if (!contains(cell, p)) continue;
    const GeodesicField field(cell, p);
    for (const Point& q : targets) {
      const double len = field.length_to(q);
      if (len < best_len - 1e-12) {
        best_len = len;
        best_path = field.path_to(q);
      }
    }
  }
  return best_path;
}

// ---------------------------------------------------------------------------
// Road maps, zones and speed

double RoadMap::length() const {
  double total = 0.0;
  for (const PolyPath& s : spokes) total += s.total_length;
  return total;
}

Point RoadMap::at(std::size_t spoke, double s) const {
  if (spoke >= spokes.size() || s <= 0.0) return hub;
  return spokes[spoke].at_length(s);
}

std::vector<DynamicZone> zone_windows(const SimplePolygon& cell, const RoadMap& road_map) {
  std::vector<DynamicZone> out;
  const double tol = 1e-9 * (1.0 + cell.diameter());
  for (std::size_t k = 0; k < road_map.spokes.size(); ++k) {
    if (road_map.spokes[k].total_length <= eps()) continue;
    for (std::size_t c : road_map.groups.at(k + 1)) {
      const Point& corner = cell[c];
      if ((corner - road_map.hub).norm() <= eps() || !segment_visible(cell, road_map.hub, corner)) continue;
      const Point dir = unit(corner - road_map.hub);
      const double exit = ray_exit(cell, corner, dir);
      if (exit <= tol) continue;
      DynamicZone z;
      z.corner = c;
      z.corner_point = corner;
      z.spoke = k;
      z.window = Segment{corner, corner + exit * dir};
      out.push_back(std::move(z));
    }
  }
  return out;
}

SpeedProgram speed_program(const SimplePolygon& cell, const RoadMap& road_map,
                           const std::vector<DynamicZone>& windows) {
  SpeedProgram program;
  for (const PolyPath& s : road_map.spokes) program.lengths.push_back(s.total_length);
  const auto reflex = cell.reflex_vertices();
  for (const DynamicZone& z : windows) {
    for (std::size_t c : reflex) {
      if (c == z.corner) continue;
      program.singles.push_back({z.spoke, distance(cell[c], z.window),
                                 "r" + std::to_string(z.spoke) + " <= o(" + std::to_string(z.corner) + "," +
                                     std::to_string(c) + ")"});
    }
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      if (windows[i].spoke == windows[j].spoke) continue;
      program.pairs.push_back({windows[i].spoke, windows[j].spoke, distance(windows[i].window, windows[j].window),
                               "r" + std::to_string(windows[i].spoke) + " + r" + std::to_string(windows[j].spoke) +
                                   " <= o(" + std::to_string(windows[i].corner) + "," +
                                   std::to_string(windows[j].corner) + ")"});
    }
  }
  return program;
}

SpeedBound speed_bound(const SpeedProgram& program, double v_e) {
  const auto& d = program.lengths;
  auto demand = [&](std::size_t k) { return k < d.size() ? d[k] : 0.0; };
  bool any = false;
  for (const auto& s : program.singles) {
    if (demand(s.spoke) <= 0.0) continue;
    if (!(s.cap > 0.0)) throw Error(ErrorKind::infeasible, "infeasible", "zone cap " + s.label + " is not positive");
    any = true;
  }
  for (const auto& p : program.pairs) {
    if (demand(p.first) + demand(p.second) <= 0.0) continue;
    if (!(p.cap > 0.0)) throw Error(ErrorKind::infeasible, "infeasible", "zone cap " + p.label + " is not positive");
    any = true;
  }

  SpeedBound out;
  if (!any) {
    out.radii.assign(d.size(), 0.0);
    return out;
  }
  // Speeds are normalised by v_e, so r_k = d_k / v.
  auto feasible = [&](double v) {
    for (const auto& s : program.singles)
      if (demand(s.spoke) / v > s.cap) return false;
    for (const auto& p : program.pairs)
      if ((demand(p.first) + demand(p.second)) / v > p.cap) return false;
    return true;
  };
  double hi = 1.0;
  while (!feasible(hi)) hi *= 2.0;
  double lo = 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.v_star = hi * v_e;
  for (double len : d) out.radii.push_back(len / hi);
  for (const auto& s : program.singles)
    if (demand(s.spoke) > 0.0 && std::abs(out.radii[s.spoke] - s.cap) <= 1e-9 * s.cap)
      out.active_constraints.push_back(s.label);
  for (const auto& p : program.pairs)
    if (demand(p.first) + demand(p.second) > 0.0 &&
        std::abs(out.radii[p.first] + out.radii[p.second] - p.cap) <= 1e-9 * p.cap)
      out.active_constraints.push_back(p.label);
  return out;
}

std::vector<std::vector<Point>> zone_outline(const SimplePolygon& cell, const Point& hub, const Segment& window,
                                             double radius, int arc_segments) {
  if (!(radius > 0.0)) return {};
  const Point u = unit(window.b - window.a);
  const Point n = perp(u);
  std::vector<Point> ring;
  auto arc = [&](const Point& centre, const Point& from) {
    // Half-turn clockwise from `from`.
    for (int i = 0; i <= arc_segments; ++i)
      ring.push_back(centre + radius * rotate(from, -std::numbers::pi * i / arc_segments));
  };
  arc(window.b, n);
  arc(window.a, Point(-n));
  const Region view = Region::of(visibility_polygon(cell, hub).vertices());
  return intersect(Region::of(ring), view).rings;
}

std::vector<DynamicZone> build_dynamic_zones(const SimplePolygon& cell, const RoadMap& road_map, double v_e,
                                             double v_p) {
  std::vector<DynamicZone> zones = zone_windows(cell, road_map);
  const SpeedProgram program = speed_program(cell, road_map, zones);
  std::vector<double> radii;
  for (double len : program.lengths) {
    if (len <= 0.0) {
      radii.push_back(0.0);
    } else if (!(v_p > 0.0)) {
      throw Error(ErrorKind::speed_too_low, "speed-too-low", "a moving guard needs positive speed");
    } else {
      radii.push_back(v_e / v_p * len);
    }
  }
  const double slack = 1e-9;
  for (const auto& s : program.singles) {
    if (radii[s.spoke] > s.cap * (1.0 + slack)) {
      throw Error(ErrorKind::speed_too_low, "speed-too-low",
                  "zone radius " + fmt(radii[s.spoke]) + " breaks " + s.label + " = " + fmt(s.cap));
    }
  }
  for (const auto& p : program.pairs) {
    if (radii[p.first] + radii[p.second] > p.cap * (1.0 + slack)) {
      throw Error(ErrorKind::speed_too_low, "speed-too-low",
                  "zone radii " + fmt(radii[p.first] + radii[p.second]) + " break " + p.label + " = " + fmt(p.cap));
    }
  }
  for (DynamicZone& z : zones) {
    z.radius = radii[z.spoke];
    z.outline = zone_outline(cell, road_map.hub, z.window, z.radius);
  }
  return zones;
}

// ---------------------------------------------------------------------------
// Targets and planning

GuardTarget guard_target(const MobilePlan& plan, const Point& e, bool inside) {
  const RoadMap& rm = plan.road_map;
  GuardTarget target;
  target.position = rm.hub;
  if (rm.spokes.empty() || plan.zones.empty()) return target;

  if (!inside || segment_visible(plan.cell, rm.hub, e)) {
    double best = 0.0;
    for (std::size_t z = 0; z < plan.zones.size(); ++z) {
      const DynamicZone& zone = plan.zones[z];
      if (!(zone.radius > 0.0)) continue;
      const double t = std::clamp(1.0 - distance(e, zone.window) / zone.radius, 0.0, 1.0);
      if (t > best) {
        best = t;
        target.spoke = zone.spoke;
        target.zone = z;
      }
    }
    target.s = best * rm.spokes[target.spoke].total_length;
    target.position = rm.at(target.spoke, target.s);
    return target;
  }

  // Hidden from the hub: the first bend of the geodesic is the window corner.
  target.hidden = true;
  const PolyPath path = shortest_path(plan.cell, rm.hub, e);
  std::optional<std::size_t> pick;
  if (path.waypoints.size() > 2) {
    const Point& corner = path.waypoints[1];
    for (std::size_t z = 0; z < plan.zones.size() && !pick; ++z)
      if ((plan.zones[z].corner_point - corner).norm() <= eps()) pick = z;
  }
  if (!pick) {
    double best = inf;
    for (std::size_t z = 0; z < plan.zones.size(); ++z) {
      const double d = distance(e, plan.zones[z].window);
      if (d < best) {
        best = d;
        pick = z;
      }
    }
  }
  target.zone = pick;
  target.spoke = plan.zones[*pick].spoke;
  target.s = rm.spokes[target.spoke].total_length;
  target.position = rm.at(target.spoke, target.s);
  return target;
}

int self_check(const MobilePlan& plan, int samples) {
  const auto box = plan.cell.bounds();
  const int k = std::max(4, static_cast<int>(std::sqrt(double(samples))));
  const Point lo = box.min(), size = box.sizes();
  int failures = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const Point p = lo + Point((i + 0.5) / k * size.x(), (j + 0.5) / k * size.y());
      if (!contains(plan.cell, p) || distance_to_boundary(plan.cell, p) < 1e-6) continue;
      const GuardTarget t = guard_target(plan, p);
      if (!segment_visible(plan.cell, t.position, p)) ++failures;
    }
  }
  return failures;
}

namespace {

// Set partitions of {0..m-1} into at most `max_blocks` blocks, as block labels.
void set_partitions(std::size_t m, int max_blocks, std::vector<int>& labels, int used,
                    std::vector<std::vector<int>>& out) {
  if (labels.size() == m) {
    out.push_back(labels);
    return;
  }
  for (int b = 0; b <= used && b < max_blocks; ++b) {
    labels.push_back(b);
    set_partitions(m, max_blocks, labels, std::max(used, b + 1), out);
    labels.pop_back();
  }
}

struct Candidate {
  RoadMap road_map;
  double v = 0.0;  // at v_e = 1
  double length = 0.0;
};

void evaluate(const SimplePolygon& cell, RoadMap rm, std::vector<Candidate>& out) {
  for (const PolyPath& s : rm.spokes)
    if (s.waypoints.empty()) return;
  const auto windows = zone_windows(cell, rm);
  const SpeedProgram program = speed_program(cell, rm, windows);
  try {
    const SpeedBound b = speed_bound(program, 1.0);
    out.push_back({rm, b.v_star, rm.length()});
  } catch (const Error&) {
    // degenerate caps: not a usable road map
  }
}

}  // namespace

MobilePlan plan_mobile(const SimplePolygon& cell, double v_e) {
  const auto reflex = cell.reflex_vertices();
  std::vector<Region> stars;
  for (std::size_t r : reflex) stars.push_back(star_region(cell, r).region);

  std::vector<std::vector<int>> labelings;
  std::vector<int> scratch;
  set_partitions(reflex.size(), 3, scratch, 0, labelings);

  std::vector<Candidate> candidates;
  const double step = cell.diameter() / 40.0;
  for (const auto& labels : labelings) {
    const int blocks = *std::max_element(labels.begin(), labels.end()) + 1;
    if (blocks < 2) continue;
    std::vector<std::vector<std::size_t>> groups(blocks);
    std::vector<Region> common(blocks);
    bool ok = true;
    for (std::size_t i = 0; i < reflex.size(); ++i) {
      groups[labels[i]].push_back(reflex[i]);
      common[labels[i]] = groups[labels[i]].size() == 1 ? stars[i] : intersect(common[labels[i]], stars[i]);
    }
    for (const Region& r : common) ok = ok && !r.empty();
    if (!ok) continue;

    for (int h = 0; h < blocks; ++h) {
      RoadMap rm;
      rm.groups.push_back(groups[h]);
      std::vector<int> others;
      for (int b = 0; b < blocks; ++b)
        if (b != h) {
          others.push_back(b);
          rm.groups.push_back(groups[b]);
        }
      if (blocks == 2) {
        const PolyPath path = region_path(cell, common[h], common[others[0]]);
        if (path.waypoints.empty()) continue;
        rm.hub = path.waypoints.front();
        rm.spokes = {path};
        evaluate(cell, rm, candidates);
      } else {
        for (const Point& w : region_candidates(cell, common[h], step)) {
          if (!contains(cell, w)) continue;
          RoadMap trial = rm;
          trial.hub = w;
          for (int b : others) trial.spokes.push_back(path_to_region(cell, w, common[b]));
          evaluate(cell, trial, candidates);
        }
      }
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::unsupported, "unsupported",
                "reflex vertices cannot be covered by three groups with common star regions");
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    const double tol = 1e-9 * std::max(1.0, std::max(a.v, b.v));
    if (std::abs(a.v - b.v) > tol) return a.v < b.v;
    return a.length < b.length - 1e-12;
  });

  std::optional<MobilePlan> chosen;
  const std::size_t limit = std::min<std::size_t>(candidates.size(), 40);
  for (std::size_t i = 0; i < limit; ++i) {
    MobilePlan plan;
    plan.cell = cell;
    plan.road_map = candidates[i].road_map;
    const auto windows = zone_windows(cell, plan.road_map);
    plan.bound = speed_bound(speed_program(cell, plan.road_map, windows), v_e);
    // r_k = d_k v_e / v_star does not depend on v_e.
    plan.zones = windows;
    for (DynamicZone& z : plan.zones) {
      z.radius = plan.bound.radii.at(z.spoke);
      z.outline = zone_outline(cell, plan.road_map.hub, z.window, z.radius);
    }
    plan.self_check_failures = self_check(plan);
    if (!chosen || plan.self_check_failures < chosen->self_check_failures) chosen = std::move(plan);
    if (chosen->self_check_failures == 0) break;
  }
  return *chosen;
}

}  // namespace guardsim
