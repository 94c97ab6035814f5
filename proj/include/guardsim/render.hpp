#pragma once
// SVG drawings of plans and traces. Mobile guard road maps are solid blue
// lines and static guards blue dots.

#include "guardsim/io.hpp"

#include <string>

namespace guardsim {

std::string render_plan_svg(const DeploymentPlan& plan);
/// Polygon from the trace header, then the intruder and guard polylines.
std::string render_trace_svg(const TraceFile& trace);

}  // namespace guardsim
