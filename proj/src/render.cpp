#include "guardsim/render.hpp"

#include "guardsim/starzones.hpp"

#include <cstdio>
#include <sstream>

namespace guardsim {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string coords(const std::vector<Point>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(pts[i].x()) + "," + num(pts[i].y());
  }
  return out;
}

std::string closed_path(const std::vector<Point>& ring) {
  std::string d;
  for (std::size_t i = 0; i < ring.size(); ++i) d += (i ? " L " : "M ") + num(ring[i].x()) + " " + num(ring[i].y());
  return d + " Z";
}

// Opens the document with y pointing up, framed around the polygon.
void open_svg(std::ostringstream& out, const std::vector<Point>& polygon) {
  Eigen::AlignedBox2d box;
  for (const Point& p : polygon) box.extend(p);
  const double margin = 0.05 * std::max(box.sizes().maxCoeff(), 1e-9);
  const Point lo = box.min() - Point(margin, margin);
  const Point size = box.sizes() + Point(2 * margin, 2 * margin);
  const double stroke = 0.004 * size.maxCoeff();
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(lo.x()) << ' ' << num(-lo.y() - size.y()) << ' '
      << num(size.x()) << ' ' << num(size.y()) << "\" width=\"800\" height=\"" << num(800.0 * size.y() / size.x())
      << "\">\n";
  out << "<g transform=\"scale(1,-1)\" stroke-width=\"" << num(stroke) << "\" stroke-linejoin=\"round\">\n";
}

void polygon_outline(std::ostringstream& out, const std::vector<Point>& polygon) {
  out << "<polygon class=\"outline\" points=\"" << coords(polygon) << "\" fill=\"none\" stroke=\"black\"/>\n";
}

double dot_radius(const std::vector<Point>& polygon) {
  Eigen::AlignedBox2d box;
  for (const Point& p : polygon) box.extend(p);
  return 0.012 * box.sizes().maxCoeff();
}

}  // namespace

std::string render_plan_svg(const DeploymentPlan& plan) {
  std::ostringstream out;
  const auto& poly = plan.polygon.vertices();
  open_svg(out, poly);
  const double dot = dot_radius(poly);

  const auto& parts = plan.partition_set.partitions;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const int hue = static_cast<int>((k * 137) % 360);
    out << "<polygon class=\"partition\" data-kind=\"" << to_string(parts[k].kind) << "\" points=\""
        << coords(parts[k].polygon.vertices()) << "\" fill=\"hsl(" << hue
        << ",60%,85%)\" stroke=\"gray\" stroke-dasharray=\"" << num(3 * dot) << "\"/>\n";
  }
  for (const GuardAssignment& a : plan.assignments) {
    for (const StarRegion& s : star_regions(a.cell.polygon))
      for (const auto& ring : s.region.rings)
        out << "<path class=\"star-region\" d=\"" << closed_path(ring)
            << "\" fill=\"orange\" fill-opacity=\"0.25\" stroke=\"orange\"/>\n";
  }
  for (const GuardAssignment& a : plan.assignments) {
    if (!a.mobile) continue;
    for (const DynamicZone& z : a.mobile->zones)
      for (const auto& ring : z.outline)
        out << "<path class=\"zone\" d=\"" << closed_path(ring)
            << "\" fill=\"red\" fill-opacity=\"0.15\" stroke=\"red\"/>\n";
  }
  polygon_outline(out, poly);
  for (const GuardAssignment& a : plan.assignments) {
    if (a.mobile) {
      for (const PolyPath& s : a.mobile->road_map.spokes)
        out << "<polyline class=\"road-map\" points=\"" << coords(s.waypoints)
            << "\" fill=\"none\" stroke=\"blue\" stroke-width=\"" << num(0.6 * dot) << "\"/>\n";
      out << "<circle class=\"hub\" cx=\"" << num(a.position.x()) << "\" cy=\"" << num(a.position.y()) << "\" r=\""
          << num(0.6 * dot) << "\" fill=\"white\" stroke=\"blue\"/>\n";
    } else {
      out << "<circle class=\"static-guard\" cx=\"" << num(a.position.x()) << "\" cy=\"" << num(a.position.y())
          << "\" r=\"" << num(dot) << "\" fill=\"blue\"/>\n";
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_trace_svg(const TraceFile& trace) {
  std::ostringstream out;
  const std::vector<Point> poly = points_from_json(trace.header.at("polygon"));
  open_svg(out, poly);
  polygon_outline(out, poly);
  const double dot = dot_radius(poly);
  if (trace.states.size() >= 2) {
    std::vector<Point> intruder;
    for (const SimState& s : trace.states) intruder.push_back(s.intruder);
    const std::size_t guards = trace.states.front().guards.size();
    for (std::size_t g = 0; g < guards; ++g) {
      std::vector<Point> path;
      for (const SimState& s : trace.states)
        if (g < s.guards.size()) path.push_back(s.guards[g]);
      out << "<polyline class=\"guard-path\" points=\"" << coords(path) << "\" fill=\"none\" stroke=\"blue\"/>\n";
    }
    out << "<polyline class=\"intruder-path\" points=\"" << coords(intruder)
        << "\" fill=\"none\" stroke=\"green\"/>\n";
    for (const SimState& s : trace.states)
      if (!s.visible)
        out << "<circle class=\"breach\" cx=\"" << num(s.intruder.x()) << "\" cy=\"" << num(s.intruder.y())
            << "\" r=\"" << num(0.5 * dot) << "\" fill=\"red\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace guardsim
