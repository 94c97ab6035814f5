#include "guardsim/io.hpp"

#include "guardsim/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace guardsim {

namespace {

void dump(const json& v, std::string& out) {
  switch (v.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      // nlohmann's default object is a std::map, so iteration is key-sorted
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump(it.value(), out);
      }
      out += '}';
      return;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        dump(v[i], out);
      }
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw Error(ErrorKind::io, "non-finite", "cannot serialize a non-finite number");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d == 0.0 ? 0.0 : d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::io, "bad-schema", what); }

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema_error(std::string("field '") + key + "' has the wrong type");
  }
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) schema_error("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json rings_json(const std::vector<std::vector<Point>>& rings) {
  json out = json::array();
  for (const auto& r : rings) out.push_back(points_to_json(r));
  return out;
}

std::vector<std::vector<Point>> rings_from(const json& j) {
  std::vector<std::vector<Point>> out;
  for (const json& r : j) out.push_back(points_from_json(r));
  return out;
}

std::string_view mode_name(GuardMode m) { return m == GuardMode::fixed ? "static" : "mobile"; }

PartitionKind kind_from(const std::string& name) {
  for (PartitionKind k : {PartitionKind::hexagon, PartitionKind::septagon, PartitionKind::octagon, PartitionKind::nonagon,
                          PartitionKind::remainder, PartitionKind::quad_group})
    if (to_string(k) == name) return k;
  schema_error("unknown partition kind '" + name + "'");
}

json mobile_json(const MobilePlan& m) {
  json spokes = json::array();
  for (const PolyPath& s : m.road_map.spokes) spokes.push_back(points_to_json(s.waypoints));
  json zones = json::array();
  for (const DynamicZone& z : m.zones) {
    zones.push_back({{"corner", z.corner},
                     {"corner_point", point_json(z.corner_point)},
                     {"spoke", z.spoke},
                     {"window", json::array({point_json(z.window.a), point_json(z.window.b)})},
                     {"radius", z.radius},
                     {"outline", rings_json(z.outline)}});
  }
  return {{"hub", point_json(m.road_map.hub)},
          {"groups", m.road_map.groups},
          {"spokes", spokes},
          {"length", m.road_map.length()},
          {"zones", zones},
          {"v_star", m.bound.v_star},
          {"radii", m.bound.radii},
          {"active_constraints", m.bound.active_constraints},
          {"self_check_failures", m.self_check_failures}};
}

MobilePlan mobile_from(const json& j, const SimplePolygon& cell) {
  MobilePlan m;
  m.cell = cell;
  m.road_map.hub = point_from(field<json>(j, "hub"));
  m.road_map.groups = field<std::vector<std::vector<std::size_t>>>(j, "groups");
  for (const json& s : field<json>(j, "spokes")) m.road_map.spokes.push_back(PolyPath::through(points_from_json(s)));
  for (const json& z : field<json>(j, "zones")) {
    DynamicZone zone;
    zone.corner = field<std::size_t>(z, "corner");
    zone.corner_point = point_from(field<json>(z, "corner_point"));
    zone.spoke = field<std::size_t>(z, "spoke");
    const json w = field<json>(z, "window");
    if (!w.is_array() || w.size() != 2) schema_error("zone window needs two points");
    zone.window = {point_from(w[0]), point_from(w[1])};
    zone.radius = field<double>(z, "radius");
    zone.outline = rings_from(field<json>(z, "outline"));
    if (zone.spoke >= m.road_map.spokes.size()) schema_error("zone refers to a missing spoke");
    m.zones.push_back(std::move(zone));
  }
  m.bound.v_star = field<double>(j, "v_star");
  m.bound.radii = field<std::vector<double>>(j, "radii");
  m.bound.active_constraints = field<std::vector<std::string>>(j, "active_constraints");
  m.self_check_failures = field<int>(j, "self_check_failures");
  return m;
}

json orthogonal_json(const OrthogonalSummary& o) {
  json quads = json::array();
  for (const Quad& q : o.quads) quads.push_back(json::array({q[0], q[1], q[2], q[3]}));
  return {{"quads", quads},
          {"groups", o.groups},
          {"leftover", o.leftover ? json(*o.leftover) : json(nullptr)},
          {"n2", o.n2},
          {"n3", o.n3},
          {"n4", o.n4},
          {"quad_count", o.quad_count()},
          {"k_prime", o.k_prime()},
          {"grouped_quads", o.grouped_quads()},
          {"floor_exact", o.floor_exact()},
          {"floor_form", o.floor_form()},
          {"hypotheses_hold", o.hypotheses_hold()}};
}

std::vector<Quad> quads_from(const json& j) {
  std::vector<Quad> out;
  if (!j.is_array()) schema_error("quads must be a list");
  for (const json& q : j) {
    if (!q.is_array() || q.size() != 4) schema_error("each quad needs four vertex indices");
    Quad quad;
    for (std::size_t k = 0; k < 4; ++k) {
      if (!q[k].is_number_integer() || q[k].get<long long>() < 0) schema_error("quad indices must be non-negative");
      quad[k] = q[k].get<std::size_t>();
    }
    out.push_back(quad);
  }
  return out;
}

OrthogonalSummary orthogonal_from(const json& j) {
  OrthogonalSummary o;
  o.quads = quads_from(field<json>(j, "quads"));
  o.groups = field<std::vector<std::vector<std::size_t>>>(j, "groups");
  const json left = field<json>(j, "leftover");
  if (!left.is_null()) o.leftover = left.get<std::size_t>();
  o.n2 = field<int>(j, "n2");
  o.n3 = field<int>(j, "n3");
  o.n4 = field<int>(j, "n4");
  return o;
}

json plan_body(const DeploymentPlan& plan) {
  json assignments = json::array();
  for (const GuardAssignment& a : plan.assignments) {
    json entry = {{"partition_id", a.partition_id},
                  {"cell_ids", a.cell.vertex_ids},
                  {"cell", points_to_json(a.cell.polygon.vertices())},
                  {"mode", mode_name(a.mode)},
                  {"position", point_json(a.position)},
                  {"v_star", a.v_star()}};
    if (a.mobile) entry["mobile"] = mobile_json(*a.mobile);
    assignments.push_back(std::move(entry));
  }
  return {{"schema_version", schema_version},
          {"kind", "plan"},
          {"polygon", points_to_json(plan.polygon.vertices())},
          {"v_e", plan.v_e},
          {"divisor", plan.divisor},
          {"bound", plan.bound},
          {"guard_total", plan.guard_total},
          {"global_v_star", plan.global_v_star},
          {"satisfies", plan.satisfies},
          {"hypotheses_hold", plan.hypotheses_hold},
          {"partition_set", to_json(plan.partition_set)},
          {"assignments", assignments},
          {"orthogonal", plan.orthogonal ? orthogonal_json(*plan.orthogonal) : json(nullptr)}};
}

void check_version(const json& j) {
  if (field<int>(j, "schema_version") != schema_version)
    throw Error(ErrorKind::io, "schema-version", "unsupported schema_version");
}

}  // namespace

std::string canonical_dump(const json& value) {
  std::string out;
  dump(value, out);
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "read-failed", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "write-failed", "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::io, "write-failed", "cannot write " + path.string());
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::io, "bad-json", e.what());
  }
}

json points_to_json(const std::vector<Point>& points) {
  json out = json::array();
  for (const Point& p : points) out.push_back(point_json(p));
  return out;
}

std::vector<Point> points_from_json(const json& j) {
  if (!j.is_array()) schema_error("expected a list of points");
  std::vector<Point> out;
  for (const json& p : j) out.push_back(point_from(p));
  return out;
}

PolygonFile polygon_file_from_json(const json& j) {
  check_version(j);
  PolygonFile file;
  file.name = j.contains("name") ? field<std::string>(j, "name") : std::string();
  std::vector<Point> pts = points_from_json(field<json>(j, "vertices"));
  const std::size_t n = pts.size();
  file.polygon = SimplePolygon(std::move(pts));
  file.orthogonal = j.contains("orthogonal") && field<bool>(j, "orthogonal");
  if (file.orthogonal && !is_orthogonal(file.polygon)) {
    throw Error(ErrorKind::not_orthogonal, "not-orthogonal", "polygon marked orthogonal has a slanted edge or odd n");
  }
  if (j.contains("quads") && !j.at("quads").is_null()) {
    if (!file.orthogonal) throw Error(ErrorKind::io, "bad-schema", "quads are only allowed for orthogonal polygons");
    std::vector<Quad> quads = quads_from(j.at("quads"));
    if (file.polygon.was_reversed())
      for (Quad& q : quads)
        for (std::size_t& v : q)
          if (v < n) v = n - 1 - v;
    file.quads = std::move(quads);
  }
  return file;
}

json to_json(const PolygonFile& file) {
  json j = {{"schema_version", schema_version},
            {"name", file.name},
            {"vertices", points_to_json(file.polygon.vertices())},
            {"orthogonal", file.orthogonal}};
  if (file.quads) {
    j["quads"] = json::array();
    for (const Quad& q : *file.quads) j["quads"].push_back(json::array({q[0], q[1], q[2], q[3]}));
  }
  return j;
}

PolygonFile read_polygon_file(const std::filesystem::path& path) {
  return polygon_file_from_json(parse_json(read_text(path)));
}

json to_json(const PartitionSet& set) {
  json parts = json::array();
  for (const Partition& p : set.partitions) {
    parts.push_back({{"vertex_ids", p.vertex_ids},
                     {"kind", to_string(p.kind)},
                     {"original_edges", p.original_edges},
                     {"diagonal_edges", p.diagonal_edges},
                     {"edges", p.edge_count()},
                     {"area", p.polygon.area()}});
  }
  json diags = json::array();
  for (const Diagonal& d : set.cut_diagonals) diags.push_back(json::array({d.first, d.second}));
  json adj = json::array();
  for (const auto& [a, b] : set.adjacency) adj.push_back(json::array({a, b}));
  json steps = json::array();
  for (const CutStep& s : set.steps) {
    steps.push_back({{"diagonal", json::array({s.diagonal.first, s.diagonal.second})},
                     {"side_edge_count", s.side_edge_count},
                     {"ear_start", s.ear_start},
                     {"fallback", s.fallback}});
  }
  const EdgeAccounting acc = edge_accounting(set);
  return {{"n", set.polygon.size()},
          {"partitions", parts},
          {"cut_diagonals", diags},
          {"adjacency", adj},
          {"steps", steps},
          {"r", set.r()},
          {"k_prime", set.remainder_edges()},
          {"edge_sum", acc.sum},
          {"edge_identity", acc.exact_form()}};
}

json to_json(const DeploymentPlan& plan) {
  json body = plan_body(plan);
  body["digest"] = hex64(fnv1a64(canonical_dump(body)));
  return body;
}

std::string plan_digest(const DeploymentPlan& plan) { return hex64(fnv1a64(canonical_dump(plan_body(plan)))); }

std::string plan_file_text(const DeploymentPlan& plan) { return canonical_dump(to_json(plan)) + "\n"; }

DeploymentPlan plan_from_json(const json& j) {
  check_version(j);
  if (field<std::string>(j, "kind") != "plan") schema_error("not a plan file");
  DeploymentPlan plan;
  plan.polygon = SimplePolygon(points_from_json(field<json>(j, "polygon")));
  plan.v_e = field<double>(j, "v_e");
  plan.divisor = field<int>(j, "divisor");
  plan.bound = field<int>(j, "bound");
  plan.guard_total = field<int>(j, "guard_total");
  plan.global_v_star = field<double>(j, "global_v_star");
  plan.satisfies = field<bool>(j, "satisfies");
  plan.hypotheses_hold = field<bool>(j, "hypotheses_hold");

  const json ps = field<json>(j, "partition_set");
  std::vector<std::vector<std::size_t>> pieces;
  std::vector<PartitionKind> kinds;
  for (const json& p : field<json>(ps, "partitions")) {
    pieces.push_back(field<std::vector<std::size_t>>(p, "vertex_ids"));
    for (std::size_t v : pieces.back())
      if (v >= plan.polygon.size()) schema_error("partition vertex out of range");
    kinds.push_back(kind_from(field<std::string>(p, "kind")));
  }
  plan.partition_set = make_partition_set(plan.polygon, pieces);
  for (std::size_t k = 0; k < kinds.size(); ++k) plan.partition_set.partitions[k].kind = kinds[k];
  plan.partition_set.cut_diagonals.clear();
  for (const json& d : field<json>(ps, "cut_diagonals"))
    plan.partition_set.cut_diagonals.emplace_back(d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>());
  plan.partition_set.adjacency.clear();
  for (const json& d : field<json>(ps, "adjacency"))
    plan.partition_set.adjacency.emplace_back(d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>());
  plan.partition_set.steps.clear();
  for (const json& s : field<json>(ps, "steps")) {
    const json d = field<json>(s, "diagonal");
    plan.partition_set.steps.push_back(CutStep{{d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>()},
                                               field<int>(s, "side_edge_count"), field<std::size_t>(s, "ear_start"),
                                               field<bool>(s, "fallback")});
  }

  for (const json& a : field<json>(j, "assignments")) {
    GuardAssignment g;
    g.partition_id = field<std::size_t>(a, "partition_id");
    g.cell.vertex_ids = field<std::vector<std::size_t>>(a, "cell_ids");
    g.cell.polygon = SimplePolygon(points_from_json(field<json>(a, "cell")), SimplePolygon::Check::preserve);
    const std::string mode = field<std::string>(a, "mode");
    if (mode != "static" && mode != "mobile") schema_error("unknown guard mode '" + mode + "'");
    g.mode = mode == "static" ? GuardMode::fixed : GuardMode::mobile;
    g.position = point_from(field<json>(a, "position"));
    if (g.mode == GuardMode::mobile) g.mobile = mobile_from(field<json>(a, "mobile"), g.cell.polygon);
    plan.assignments.push_back(std::move(g));
  }
  const json orth = field<json>(j, "orthogonal");
  if (!orth.is_null()) plan.orthogonal = orthogonal_from(orth);

  if (j.contains("digest") && field<std::string>(j, "digest") != plan_digest(plan))
    throw Error(ErrorKind::io, "digest-mismatch", "plan digest does not match its content");
  return plan;
}

json to_json(const SimConfig& c) {
  json events = json::array();
  for (const SteerEvent& e : c.steer_events)
    events.push_back({{"step", e.step}, {"heading", point_json(e.heading)}, {"magnitude", e.magnitude}});
  return {{"dt", c.dt},
          {"v_e", c.v_e},
          {"v_p", c.v_p},
          {"steps", c.steps},
          {"seed", c.seed},
          {"policy", to_string(c.policy)},
          {"waypoints", points_to_json(c.waypoints)},
          {"start", c.start ? point_json(*c.start) : json(nullptr)},
          {"steer_events", events}};
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig c;
  c.dt = field<double>(j, "dt");
  c.v_e = field<double>(j, "v_e");
  c.v_p = field<double>(j, "v_p");
  c.steps = field<int>(j, "steps");
  c.seed = field<std::uint64_t>(j, "seed");
  c.policy = parse_policy(field<std::string>(j, "policy"));
  c.waypoints = points_from_json(field<json>(j, "waypoints"));
  const json start = field<json>(j, "start");
  if (!start.is_null()) c.start = point_from(start);
  for (const json& e : field<json>(j, "steer_events"))
    c.steer_events.push_back({field<int>(e, "step"), point_from(field<json>(e, "heading")), field<double>(e, "magnitude")});
  return c;
}

json to_json(const SimState& s) {
  json zones = json::array();
  for (const auto& z : s.active_zone) zones.push_back(z ? json(*z) : json(nullptr));
  return {{"kind", "state"},
          {"step", s.step},
          {"t", s.t},
          {"intruder", point_json(s.intruder)},
          {"guards", points_to_json(s.guards)},
          {"active_zone", zones},
          {"responsible", s.responsible},
          {"visible", s.visible}};
}

SimState sim_state_from_json(const json& j) {
  SimState s;
  s.step = field<int>(j, "step");
  s.t = field<double>(j, "t");
  s.intruder = point_from(field<json>(j, "intruder"));
  s.guards = points_from_json(field<json>(j, "guards"));
  for (const json& z : field<json>(j, "active_zone"))
    s.active_zone.push_back(z.is_null() ? std::nullopt : std::optional<std::size_t>(z.get<std::size_t>()));
  s.responsible = field<std::vector<std::size_t>>(j, "responsible");
  s.visible = field<bool>(j, "visible");
  return s;
}

std::string states_digest(const std::vector<SimState>& states) {
  std::string text;
  for (const SimState& s : states) text += canonical_dump(to_json(s)) + "\n";
  return hex64(fnv1a64(text));
}

std::string trace_file_text(const SimTrace& trace, const DeploymentPlan& plan) {
  const json header = {{"kind", "trace_header"},
                       {"schema_version", schema_version},
                       {"polygon", points_to_json(plan.polygon.vertices())},
                       {"plan_digest", plan_digest(plan)},
                       {"config", to_json(trace.config)}};
  std::string text = canonical_dump(header) + "\n";
  for (const SimState& s : trace.states) text += canonical_dump(to_json(s)) + "\n";
  const json summary = {{"kind", "summary"},
                        {"states", trace.states.size()},
                        {"breach_steps", trace.breach_steps},
                        {"digest", hex64(fnv1a64(text))}};
  return text + canonical_dump(summary) + "\n";
}

TraceFile parse_trace_file(std::string_view text) {
  TraceFile out;
  std::size_t pos = 0, body_end = 0;
  std::optional<json> summary;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty()) {
      const json j = parse_json(line);
      const std::string kind = field<std::string>(j, "kind");
      if (summary) schema_error("content after the trace summary");
      if (kind == "trace_header") {
        if (!out.header.is_null()) schema_error("duplicate trace header");
        check_version(j);
        out.header = j;
      } else if (kind == "state") {
        if (out.header.is_null()) schema_error("state before the trace header");
        out.states.push_back(sim_state_from_json(j));
      } else if (kind == "summary") {
        summary = j;
        body_end = pos;
      } else {
        schema_error("unknown trace line kind '" + kind + "'");
      }
    }
    pos = eol + 1;
  }
  if (out.header.is_null() || !summary) schema_error("trace needs a header and a summary");
  out.breach_steps = field<std::vector<int>>(*summary, "breach_steps");
  out.digest = field<std::string>(*summary, "digest");
  if (out.digest != hex64(fnv1a64(text.substr(0, body_end))))
    throw Error(ErrorKind::io, "digest-mismatch", "trace digest does not match its content");
  std::vector<int> breaches;
  for (const SimState& s : out.states)
    if (!s.visible) breaches.push_back(s.step);
  if (breaches != out.breach_steps) schema_error("breach_steps disagree with the states");
  return out;
}

}  // namespace guardsim
