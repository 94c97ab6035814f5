// guardsim: partition | deploy | simulate | render | serve
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 the simulation
// recorded at least one breach. Errors go to stderr as "E:<tag> <message>".

#include "guardsim/error.hpp"
#include "guardsim/io.hpp"
#include "guardsim/render.hpp"
#include "guardsim/service.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace guardsim;

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_breach = 3;

Point parse_point(const std::string& text) {
  std::istringstream in(text);
  double x = 0, y = 0;
  char comma = 0;
  if (!(in >> x >> comma >> y) || comma != ',' || !(in >> std::ws).eof())
    throw Error(ErrorKind::config_invalid, "bad-point", "expected x,y but got '" + text + "'");
  return {x, y};
}

std::vector<Point> parse_points(const std::string& text) {
  std::vector<Point> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ';');)
    if (!item.empty()) out.push_back(parse_point(item));
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

DeploymentPlan read_plan(const std::string& path) { return plan_from_json(parse_json(read_text(path))); }

void check_eps_override() {
  const char* env = std::getenv("GUARDSIM_EPS");
  if (!env) return;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0.0)
    throw Error(ErrorKind::config_invalid, "bad-eps", "GUARDSIM_EPS must be a positive number");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guard deployment and intruder tracking in simple polygons"};
  app.require_subcommand(1);

  std::string input, output = "-";
  double v_e = 1.0;

  auto* partition = app.add_subcommand("partition", "Cut a polygon into 6..9-edge pieces");
  partition->add_option("input", input, "Polygon file")->required();
  partition->add_option("-o,--out", output, "Output file (default stdout)");

  auto* deploy = app.add_subcommand("deploy", "Build a deployment plan");
  deploy->add_option("input", input, "Polygon file")->required();
  deploy->add_option("--ve", v_e, "Intruder speed bound")->check(CLI::NonNegativeNumber);
  deploy->add_option("-o,--out", output, "Output plan file (default stdout)");

  std::string policy = "random_walk", start, waypoints, steer_log;
  int steps = 10000;
  std::uint64_t seed = 42;
  std::optional<double> v_p, dt;
  auto* simulate = app.add_subcommand("simulate", "Run an intruder against a plan");
  simulate->add_option("plan", input, "Plan file")->required();
  simulate->add_option("--policy", policy, "random_walk | greedy_escape | corner_rush | scripted | steer");
  simulate->add_option("--steps", steps, "Number of steps");
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--vp", v_p, "Guard speed (default: the plan's v*)");
  simulate->add_option("--dt", dt, "Time step (default: largest admissible)");
  simulate->add_option("--start", start, "Intruder start x,y");
  simulate->add_option("--waypoints", waypoints, "Scripted loop x,y;x,y;...");
  simulate->add_option("--steer-log", steer_log, "JSON list of recorded steer events (steer policy)");
  simulate->add_option("-o,--out", output, "Output trace file (default stdout)");

  auto* render = app.add_subcommand("render", "Draw a plan or trace as SVG");
  render->add_option("input", input, "Plan or trace file")->required();
  render->add_option("-o,--out", output, "Output SVG (default stdout)");

  ServiceOptions service_options;
  auto* serve = app.add_subcommand("serve", "Serve live sessions over a websocket");
  serve->add_option("plan", input, "Plan file")->required();
  serve->add_option("--port", service_options.port, "TCP port");
  serve->add_option("--address", service_options.address, "Listen address");
  serve->add_option("--vp", v_p, "Guard speed (default: the plan's v*)");
  serve->add_option("--seed", seed, "Random seed");
  serve->add_option("--start", start, "Intruder start x,y");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "E:usage " << e.what() << "\n";
    return exit_invalid;
  }

  try {
    check_eps_override();
    if (*partition) {
      const PolygonFile file = read_polygon_file(input);
      emit(output, canonical_dump(to_json(minimal_partition(file.polygon))) + "\n");
      return 0;
    }
    if (*deploy) {
      const PolygonFile file = read_polygon_file(input);
      const DeploymentPlan plan =
          file.orthogonal ? deploy_orthogonal(file.polygon, v_e, file.quads) : deploy_polygon(file.polygon, v_e);
      emit(output, plan_file_text(plan));
      return 0;
    }
    if (*simulate || *serve) {
      const DeploymentPlan plan = read_plan(input);
      SimConfig config;
      config.v_e = plan.v_e;
      config.v_p = v_p.value_or(plan.global_v_star);
      config.seed = seed;
      if (!start.empty()) config.start = parse_point(start);
      if (*serve) {
        Service service(plan, config, service_options);
        std::cerr << "listening on " << service_options.address << ":" << service.port() << "\n";
        service.run();
        return 0;
      }
      config.steps = steps;
      config.policy = parse_policy(policy);
      if (dt) config.dt = *dt;
      config.waypoints = parse_points(waypoints);
      if (!steer_log.empty()) {
        const json log = parse_json(read_text(steer_log));
        config.steer_events = sim_config_from_json(json{{"dt", 0.0},
                                                        {"v_e", 0.0},
                                                        {"v_p", 0.0},
                                                        {"steps", 0},
                                                        {"seed", 0},
                                                        {"policy", "steer"},
                                                        {"waypoints", json::array()},
                                                        {"start", nullptr},
                                                        {"steer_events", log}})
                                  .steer_events;
      }
      const SimTrace trace = run(plan, config);
      emit(output, trace_file_text(trace, plan));
      return trace.breach_steps.empty() ? 0 : exit_breach;
    }
    if (*render) {
      const std::string text = read_text(input);
      const std::string first_line = text.substr(0, text.find('\n'));
      const json head = parse_json(first_line);
      if (head.is_object() && head.value("kind", "") == "trace_header") {
        emit(output, render_trace_svg(parse_trace_file(text)));
      } else {
        emit(output, render_plan_svg(plan_from_json(parse_json(text))));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "E:" << e.tag() << " " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "E:internal " << e.what() << "\n";
    return 1;
  }
  return 0;
}
