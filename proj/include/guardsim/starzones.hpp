#pragma once
// Star regions, road maps, dynamic zones and the guard-speed bound.
//
// A mobile guard patrols a hub-and-spoke road map. The hub W0 lies in the
// common star region of one group of reflex vertices, each spoke runs to the
// common star region of another group. Seen from the hub, every reflex corner
// C of a spoke group hides a pocket behind the window ray from C directed
// away from the hub. The dynamic zone of C is the part of the hub's view
// within distance r of that window; while the intruder is there the guard sits
// at fraction 1 - dist/r of its spoke, and in the pocket it sits at the spoke
// end, which sees around C.

#include "guardsim/geometry.hpp"
#include "guardsim/region.hpp"

#include <optional>
#include <string>
#include <vector>

namespace guardsim {

struct StarRegion {
  std::size_t owner_vertex = 0;
  Region region;
};

/// Points that see the reflex vertex and lie in the wedge across it.
StarRegion star_region(const SimplePolygon& polygon, std::size_t reflex_vertex);
std::vector<StarRegion> star_regions(const SimplePolygon& polygon);
/// Common intersection; empty if any pair fails to overlap with positive area.
Region star_intersection(const std::vector<StarRegion>& regions);

struct MinEdgesReport {
  struct PerReflex {
    std::size_t vertex = 0;
    /// Polygon edges that do not meet the star region.
    int non_intersecting = 0;
    int required = 0;
    bool ok = true;
  };
  struct PentagonAngles {
    double first_pair = 0.0;
    double second_pair = 0.0;
    bool ok = true;
  };

  int n = 0;
  std::vector<PerReflex> per_reflex;
  /// Size of the largest family of pairwise disjoint star regions (n_d).
  int disjoint_count = 0;
  std::vector<std::size_t> disjoint_set;
  int required_for_disjoint = 0;
  bool star_count_ok = true;
  /// Present for pentagons with one reflex vertex and two edges clear of its
  /// star region: both angle pairs beside the star region must sum below pi.
  std::optional<PentagonAngles> pentagon;

  int violations() const;
};

MinEdgesReport min_edges_check(const SimplePolygon& polygon);

struct RoadMap {
  Point hub = Point::Zero();
  /// Reflex vertex groups; group 0 holds the hub, group k+1 ends spoke k.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<PolyPath> spokes;

  double length() const;
  bool zero_length() const { return length() <= eps(); }
  /// Point at arc length s along spoke k (the hub when s <= 0).
  Point at(std::size_t spoke, double s) const;
};

struct DynamicZone {
  std::size_t corner = 0;
  Point corner_point = Point::Zero();
  std::size_t spoke = 0;
  /// Window edge of the hub's view: from the corner along the ray away from
  /// the hub up to where it leaves the polygon.
  Segment window;
  double radius = 0.0;
  /// Tessellated outline (capsule around the window within the hub's view),
  /// for rendering and sampled disjointness tests.
  std::vector<std::vector<Point>> outline;

  /// Trigger ray l from the corner.
  Ray ray() const { return Ray(window.a, window.b - window.a); }
};

/// Caps on the zone radii: r_k <= c and r_k + r_j <= c.
struct SpeedProgram {
  struct Single {
    std::size_t spoke;
    double cap;
    std::string label;
  };
  struct Pair {
    std::size_t first;
    std::size_t second;
    double cap;
    std::string label;
  };

  std::vector<double> lengths;
  std::vector<Single> singles;
  std::vector<Pair> pairs;
};

struct SpeedBound {
  double v_star = 0.0;
  /// Zone radius per spoke at guard speed v_star.
  std::vector<double> radii;
  std::vector<std::string> active_constraints;
};

/// min over radii of max_k d_k v_e / r_k subject to the caps, by bisection.
/// Throws Infeasible when a cap with positive demand is not positive.
SpeedBound speed_bound(const SpeedProgram& program, double v_e);

/// Window geometry for every spoke-group corner, with radii left at zero.
std::vector<DynamicZone> zone_windows(const SimplePolygon& cell, const RoadMap& road_map);
/// Caps from the windows: no zone reaches another reflex vertex, zones of
/// different spokes stay apart.
SpeedProgram speed_program(const SimplePolygon& cell, const RoadMap& road_map, const std::vector<DynamicZone>& windows);

/// Zones with r = (v_e / v_p) * |spoke|. Throws SpeedTooLow when the radii
/// break the caps.
std::vector<DynamicZone> build_dynamic_zones(const SimplePolygon& cell, const RoadMap& road_map, double v_e, double v_p);

/// Outline of a zone: capsule of radius r around the window, within the view
/// of the hub. `arc_segments` per half-disc.
std::vector<std::vector<Point>> zone_outline(const SimplePolygon& cell, const Point& hub, const Segment& window,
                                             double radius, int arc_segments = 64);

struct MobilePlan {
  SimplePolygon cell;
  RoadMap road_map;
  std::vector<DynamicZone> zones;
  SpeedBound bound;
  /// Sample points whose target position failed to see them.
  int self_check_failures = 0;
};

struct GuardTarget {
  std::size_t spoke = 0;
  /// Arc length along the spoke.
  double s = 0.0;
  std::optional<std::size_t> zone;
  bool hidden = false;
  Point position = Point::Zero();
};

/// Position on the road map prescribed for an intruder at e. Points hidden
/// from the hub map to the end of the spoke serving their pocket. With
/// `inside` false the point is treated as visible from the hub.
GuardTarget guard_target(const MobilePlan& plan, const Point& e, bool inside = true);

/// Best road map over reflex groupings and hub choices. Throws Unsupported
/// when more than three groups would be needed.
MobilePlan plan_mobile(const SimplePolygon& cell, double v_e);

/// Count of sample points (grid of about `samples` points) whose guard target
/// does not see them.
int self_check(const MobilePlan& plan, int samples = 1600);

/// Road map between the two closest points of two regions.
PolyPath region_path(const SimplePolygon& cell, const Region& from, const Region& to);
/// Shortest path from a point to a region.
PolyPath path_to_region(const SimplePolygon& cell, const Point& from, const Region& to);

}  // namespace guardsim
