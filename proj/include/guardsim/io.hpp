#pragma once
// File formats: polygon input, plan and trace files, canonical JSON and the
// FNV-1a digests that make runs comparable byte for byte.

#include "guardsim/orthogonal.hpp"
#include "guardsim/simulate.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guardsim {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

/// Sorted keys, no whitespace, doubles at 17 significant digits.
std::string canonical_dump(const json& value);
inline constexpr std::uint64_t fnv_offset = 0xcbf29ce484222325ull;
/// Pass a previous result as `h` to continue a digest across chunks.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = fnv_offset);
std::string hex64(std::uint64_t value);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
/// Parses JSON, throwing Error(io, "bad-json").
json parse_json(std::string_view text);

struct PolygonFile {
  std::string name;
  SimplePolygon polygon;
  bool orthogonal = false;
  /// Vertex indices refer to the stored (counterclockwise) order.
  std::optional<std::vector<Quad>> quads;
};

PolygonFile polygon_file_from_json(const json& j);
json to_json(const PolygonFile& file);
PolygonFile read_polygon_file(const std::filesystem::path& path);

json points_to_json(const std::vector<Point>& points);
std::vector<Point> points_from_json(const json& j);

json to_json(const PartitionSet& set);
json to_json(const DeploymentPlan& plan);
DeploymentPlan plan_from_json(const json& j);
/// Digest of the plan's canonical form (without its own digest field).
std::string plan_digest(const DeploymentPlan& plan);
/// Canonical plan text with its digest, newline terminated.
std::string plan_file_text(const DeploymentPlan& plan);

json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const json& j);
json to_json(const SimState& state);
SimState sim_state_from_json(const json& j);

struct TraceFile {
  json header;
  std::vector<SimState> states;
  std::vector<int> breach_steps;
  std::string digest;
};

/// JSON lines: a header, one line per state, then a summary carrying the
/// breach steps and the digest of every line before it.
std::string trace_file_text(const SimTrace& trace, const DeploymentPlan& plan);
/// Parses and checks the digest and the breach list against the states.
TraceFile parse_trace_file(std::string_view text);
/// Digest of the state lines alone, shared by the service replay check.
std::string states_digest(const std::vector<SimState>& states);

}  // namespace guardsim
