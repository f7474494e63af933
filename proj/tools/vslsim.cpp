// vslsim: run, sweep and compare VSL scenarios, or serve one live.
// Exit codes: 0 ok, 1 validation/usage error, 2 I/O or bind failure.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "CLI11.hpp"
#include "vsl/errors.hpp"
#include "vsl/runner.hpp"
#include "vsl/scenario.hpp"
#include "vsl/sweep.hpp"
#include "vsl/telemetry.hpp"
#include "vsl/teleop/server.hpp"
#include "vsl/teleop/service.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

struct CommonOptions {
  std::vector<std::string> overrides;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<int> decimate;
  bool quiet = false;
};

std::string default_out_dir() {
  const char* env = std::getenv("VSLSIM_OUT_DIR");
  return env && *env ? env : "out";
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--override", o.overrides, "Patch a scenario field, key=value (dotted path, repeatable)");
  cmd->add_option("--dt", o.dt, "Integration step [s]");
  cmd->add_option("--seed", o.seed, "Disturbance seed");
  cmd->add_option("--decimate", o.decimate, "Record every Nth step");
  cmd->add_flag("-q,--quiet", o.quiet, "Suppress progress output");
}

YAML::Node load_patched(const std::string& path, const CommonOptions& o) {
  YAML::Node root = vsl::read_document(path);
  for (const auto& ov : o.overrides) vsl::apply_override(root, ov);
  if (o.dt) vsl::set_path(root, "dt", YAML::Node(*o.dt));
  if (o.seed) vsl::set_path(root, "disturbances.seed", YAML::Node(*o.seed));
  if (o.decimate) vsl::set_path(root, "decimate", YAML::Node(*o.decimate));
  return root;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vsl::IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw vsl::IoError("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw vsl::IoError("cannot create directory " + dir.string());
}

const char* kPlotSpec =
    "# Strip charts over telemetry.csv; shading follows sigma_measured (0 blue, 1 red).\n"
    "data: telemetry.csv\n"
    "x: t\n"
    "panels:\n"
    "  - title: UAV attitude [rad]\n"
    "    series: [theta_x, theta_y]\n"
    "  - title: Tip deflection [rad]\n"
    "    series: [alpha_x, alpha_y]\n"
    "  - title: Stiffness and load cell\n"
    "    series: [sigma_target, sigma_measured]\n"
    "    secondary: [load_cell]\n"
    "  - title: Disturbance torque [N m]\n"
    "    series: [tau_d_x, tau_d_y, tau_w_x, tau_w_y]\n"
    "  - title: Position [m]\n"
    "    series: [x_uav, x_tip, y_uav, y_tip]\n"
    "shade:\n"
    "  column: sigma_measured\n"
    "  low: blue\n"
    "  high: red\n";

void write_run(const fs::path& dir, const vsl::RunResult& result) {
  ensure_dir(dir);
  vsl::write_telemetry(result.records, dir / "telemetry.csv");
  write_text(dir / "summary.yaml", vsl::summary_yaml(result.summary));
  write_text(dir / "summary.csv", vsl::summary_csv(result.summary));
  write_text(dir / "plot.spec", kPlotSpec);
}

int cmd_run(const std::string& path, const fs::path& out, const CommonOptions& o) {
  const auto scenario = vsl::scenario_from_node(load_patched(path, o), path);
  const auto result = vsl::run(scenario);
  write_run(out, result);
  if (!o.quiet) {
    std::cout << scenario.name << ": " << result.records.size() << " records, "
              << result.summary.validity_breaches << " validity breaches -> " << out.string() << '\n';
  }
  return kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw vsl::DomainError("grid value '" + item + "' is not a number");
    }
  }
  if (grid.empty()) throw vsl::DomainError("grid must not be empty");
  return grid;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& grid_text,
              const fs::path& out, int jobs, const CommonOptions& o) {
  const auto grid = parse_grid(grid_text);
  const auto points = vsl::expand_sweep(load_patched(path, o), param, grid, path);
  std::vector<vsl::Scenario> scenarios;
  scenarios.reserve(points.size());
  for (const auto& p : points) scenarios.push_back(p.scenario);
  const auto results = vsl::run_batch_parallel(scenarios, jobs);
  ensure_dir(out);
  for (std::size_t i = 0; i < results.size(); ++i) {
    write_run(out / ("point_" + std::to_string(i)), results[i]);
  }
  write_text(out / "sweep.csv", vsl::sweep_csv(param, points, results));
  if (!o.quiet) std::cout << "sweep " << param << ": " << results.size() << " runs -> " << out.string() << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const fs::path& out,
                const CommonOptions& o) {
  const auto a = vsl::run(vsl::scenario_from_node(load_patched(a_path, o), a_path));
  const auto b = vsl::run(vsl::scenario_from_node(load_patched(b_path, o), b_path));
  const auto report = vsl::compare_runs(a.summary, b.summary);
  write_run(out / "a", a);
  write_run(out / "b", b);
  const std::string table = vsl::comparison_csv(report);
  write_text(out / "comparison.csv", table);
  if (!o.quiet) std::cout << table;
  return kExitOk;
}

struct ServeOptions {
  std::string bind = "127.0.0.1:8765";
  double rate = 30.0;
  double time_scale = 1.0;
  std::size_t max_clients = 8;
  int telemetry_decimate = 10;
  std::string command_log;
};

int cmd_serve(const std::string& path, const fs::path& out, const ServeOptions& s, const CommonOptions& o) {
  const auto scenario = vsl::scenario_from_node(load_patched(path, o), path);
  vsl::teleop::ServiceConfig cfg;
  cfg.rate_hz = s.rate;
  cfg.time_scale = s.time_scale;
  cfg.max_clients = s.max_clients;
  cfg.telemetry_decimate = s.telemetry_decimate;
  vsl::teleop::validate(cfg);
  auto server_cfg = vsl::teleop::parse_bind(s.bind);
  server_cfg.max_clients = s.max_clients;

  std::vector<vsl::teleop::CommandMessage> log;
  if (!s.command_log.empty()) log = vsl::teleop::read_command_log(s.command_log);
  ensure_dir(out);
  const fs::path telemetry_path = out / "telemetry.csv";

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  if (cfg.time_scale == 0.0) {
    vsl::teleop::TeleopServer server(server_cfg, [](const vsl::teleop::CommandMessage&) {
      return std::optional<std::string>("stepped mode: commands come from the command log");
    });
    server.start();
    if (!o.quiet) std::cout << "serving (stepped) on port " << server.port() << std::endl;
    const auto result = vsl::teleop::replay_stepped(
        scenario, log, cfg, [&](const vsl::teleop::StateFrame& f) { server.broadcast(vsl::teleop::encode_frame(f)); });
    write_text(telemetry_path, result.telemetry_csv);
    for (const auto& r : result.rejected) std::cerr << "rejected: " << r << '\n';
    server.stop();
    return kExitOk;
  }

  std::ofstream telemetry(telemetry_path, std::ios::binary);
  if (!telemetry) throw vsl::IoError("cannot write " + telemetry_path.string());
  telemetry << vsl::kTelemetryHeader << '\n';
  vsl::teleop::TeleopCore core(scenario, cfg, [&](const vsl::TelemetryRecord& r) {
    telemetry << vsl::format_record(r) << '\n';
  });
  vsl::teleop::TeleopServer server(server_cfg, [&core](const vsl::teleop::CommandMessage& cmd) {
    return core.submit(cmd);
  });
  server.start();
  if (!o.quiet) std::cout << "serving on " << server_cfg.address << ":" << server.port() << std::endl;
  std::size_t next = 0;
  // Log entries are submitted once sim time reaches them.
  vsl::teleop::run_realtime(core, server, g_stop, [&] {
    while (next < log.size() && core.simulation().time() + 1e-12 >= log[next].t) {
      if (auto err = core.submit(log[next])) std::cerr << "rejected: " << *err << '\n';
      ++next;
    }
  });
  server.stop();
  telemetry.flush();
  telemetry.close();
  if (!o.quiet) std::cout << "stopped; telemetry -> " << telemetry_path.string() << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrotor + variable stiffness link payload simulator"};
  app.require_subcommand(1);
  std::string out_default = default_out_dir();

  CommonOptions common;
  std::string scenario_path;
  std::string out_dir = out_default;

  auto* run = app.add_subcommand("run", "Run one scenario and write telemetry, summary and plot spec");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("-o,--out", out_dir, "Output directory (default $VSLSIM_OUT_DIR or ./out)");
  add_common(run, common);

  std::string param;
  std::string grid;
  int jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "Run one scenario per grid value of a parameter");
  sweep->add_option("scenario", scenario_path, "Scenario file")->required();
  sweep->add_option("--param", param, "Scenario path to vary (e.g. params.k_max, or sigma)")->required();
  sweep->add_option("--grid", grid, "Comma separated values")->required();
  sweep->add_option("-o,--out", out_dir, "Output directory");
  sweep->add_option("-j,--jobs", jobs, "Worker threads (0 = all cores)");
  add_common(sweep, common);

  std::string other_path;
  auto* compare = app.add_subcommand("compare", "Run two scenarios and compare window metrics (ratios b/a)");
  compare->add_option("a", scenario_path, "Baseline scenario")->required();
  compare->add_option("b", other_path, "Candidate scenario")->required();
  compare->add_option("-o,--out", out_dir, "Output directory");
  add_common(compare, common);

  ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Expose a live simulation over WebSocket");
  serve->add_option("scenario", scenario_path, "Scenario file")->required();
  serve->add_option("--bind", serve_opts.bind, "host:port (port 0 = ephemeral)");
  serve->add_option("--rate", serve_opts.rate, "State frame rate [Hz]");
  serve->add_option("--time-scale", serve_opts.time_scale, "Sim seconds per wall second (0 = stepped replay)");
  serve->add_option("--max-clients", serve_opts.max_clients, "Connection limit");
  serve->add_option("--telemetry-decimate", serve_opts.telemetry_decimate, "Telemetry file decimation");
  serve->add_option("--command-log", serve_opts.command_log, "JSON-lines command script");
  serve->add_option("-o,--out", out_dir, "Output directory for telemetry.csv");
  add_common(serve, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, out_dir, common);
    if (sweep->parsed()) return cmd_sweep(scenario_path, param, grid, out_dir, jobs, common);
    if (compare->parsed()) return cmd_compare(scenario_path, other_path, out_dir, common);
    if (serve->parsed()) return cmd_serve(scenario_path, out_dir, serve_opts, common);
  } catch (const vsl::IoError& e) {
    std::cerr << "vslsim: " << e.what() << '\n';
    return kExitIo;
  } catch (const vsl::teleop::DecodeError& e) {
    std::cerr << "vslsim: command log field '" << e.field() << "': " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "vslsim: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
