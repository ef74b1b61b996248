#include <CLI11.hpp>
#include <pthread.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "urbscale/error.hpp"
#include "urbscale_app/commands.hpp"
#include "urbscale_app/service.hpp"

namespace urbscale::app {

void init_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_logger_mt("urbscale");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("URBSCALE_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  });
}

namespace {

void parse_grid_flag(const std::string& text, RunConfig& config) {
  const auto x = text.find('x');
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      config.nx = config.ny = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      config.nx = std::stoi(text.substr(0, x), &used);
      if (used != x) throw std::invalid_argument(text);
      const auto rest = text.substr(x + 1);
      config.ny = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw AppError(kExitInput, "--grid expects N or NXxNY, got '" + text + "'");
  }
  if (config.nx < 2 || config.ny < 2 || config.nx > 2000 || config.ny > 2000) {
    throw AppError(kExitInput, "--grid dimensions must be within 2..2000");
  }
}

int serve(const RunConfig& config, std::ostream& err) {
  // Block termination signals before any server thread exists so that only
  // the waiter below receives them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGTERM);
  sigaddset(&set, SIGINT);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service(ServiceConfig{config.variogram, config.nx, config.ny, config.static_dir});
  const int port = service.bind(config.host, config.port);
  if (port < 0) {
    err << "urbscale: cannot listen on " << config.host << ":" << config.port << "\n";
    return kExitInput;
  }

  std::atomic<bool> done{false};
  std::jthread waiter([&] {
    const timespec tick{0, 200'000'000};
    while (!done) {
      if (sigtimedwait(&set, nullptr, &tick) > 0) {
        spdlog::info("shutting down");
        service.stop();
        return;
      }
    }
  });

  int status = kExitOk;
  bool listened = true;
  std::jthread server([&] { listened = service.run(); });
  service.wait_until_ready();
  spdlog::warn("listening on http://{}:{}", config.host, port);
  try {
    service.load(std::make_shared<const Workspace>(load_workspace(config.load)));
  } catch (const AppError& e) {
    err << "urbscale: " << e.what() << "\n";
    status = e.exit_code();
    service.stop();
  }
  server.join();
  done = true;
  if (!listened && status == kExitOk) status = kExitInput;
  return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  init_logging();
  RunConfig config;
  std::string variogram = "exponential", transform = "all", dependent = "gas_per_area", grid;
  unsigned jobs = 0;

  CLI::App app{"Urban density scaling indicators, planning planes and scenarios", "urbscale"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--blocks-dir", config.load.blocks_dir, "Directory of <city_id>.csv block tables");
    sub->add_option("--observables", config.load.observables, "City observables CSV");
    sub->add_option("--out", config.out, "Output directory");
    sub->add_option("--classes", config.load.classify.classes, "Density classes per city");
    sub->add_option("--tolerance", config.load.tolerance, "Population mismatch tolerance");
    sub->add_option("--jobs", jobs, "Parallel city workers (default: all cores)");
    sub->add_flag("--area-weighted", config.load.classify.area_weighted,
                  "Weight blocks by area when clustering");
  };
  auto planar = [&](CLI::App* sub) {
    sub->add_option("--variogram", variogram, "exponential, spherical or gaussian");
    sub->add_option("--grid", grid, "Grid size N or NXxNY");
    sub->add_option("--dependent", dependent, "gas_per_area or co2_per_capita");
  };

  auto* indicator = app.add_subcommand("indicator", "Scaling indicator table for every city");
  common(indicator);
  auto* spectrum = app.add_subcommand("spectrum", "Fractal spectrum SVG for one city");
  common(spectrum);
  spectrum->add_option("--city", config.city, "City id");
  auto* correlate = app.add_subcommand("correlate", "Cross-city correlations");
  common(correlate);
  correlate->add_option("--transform", transform, "linear, log_x, log_y, log_log or all");
  auto* plane = app.add_subcommand("plane", "Kriged planning plane");
  common(plane);
  planar(plane);
  auto* scenario = app.add_subcommand("scenario", "Evaluate a development scenario");
  common(scenario);
  planar(scenario);
  scenario->add_option("--city", config.city, "City id");
  scenario->add_option("--delta-file", config.delta_file, "Scenario delta JSON");
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API");
  common(serve_cmd);
  planar(serve_cmd);
  serve_cmd->add_option("--port", config.port, "TCP port");
  serve_cmd->add_option("--host", config.host, "Bind address");
  serve_cmd->add_option("--static-dir", config.static_dir, "Directory served at /");
  for (auto* sub : {indicator, spectrum, correlate, plane, scenario}) {
    sub->add_flag("--stdout", config.to_stdout, "Also print the main artifact to stdout");
  }

  std::vector<const char*> argv{"urbscale"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "urbscale: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    config.load.jobs = jobs;
    auto kind = parse_variogram(variogram);
    if (!kind) throw AppError(kExitInput, "unknown variogram '" + variogram + "'");
    config.variogram = *kind;
    if (transform != "all") {
      auto t = parse_transform(transform);
      if (!t) throw AppError(kExitInput, "unknown transform '" + transform + "'");
      config.transform = *t;
    }
    auto dep = parse_variable(dependent);
    if (!dep || (*dep != CityVariable::gas_per_area && *dep != CityVariable::co2_per_capita)) {
      throw AppError(kExitInput, "dependent must be gas_per_area or co2_per_capita");
    }
    config.dependent = *dep;
    if (!grid.empty()) parse_grid_flag(grid, config);

    if (indicator->parsed()) cmd_indicator(config, out);
    if (spectrum->parsed()) cmd_spectrum(config, out);
    if (correlate->parsed()) cmd_correlate(config, out);
    if (plane->parsed()) cmd_plane(config, out);
    if (scenario->parsed()) cmd_scenario(config, out);
    if (serve_cmd->parsed()) return serve(config, err);
  } catch (const AppError& e) {
    err << "urbscale: " << e.what() << "\n";
    return e.exit_code();
  } catch (const Error& e) {
    err << "urbscale: " << code_name(e.code()) << ": " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitOk;
}

}  // namespace urbscale::app
