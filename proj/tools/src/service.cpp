#include "urbscale_app/service.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <map>
#include <mutex>
#include <tuple>

#include "urbscale/error.hpp"
#include "urbscale/scenario.hpp"
#include "urbscale/serialize.hpp"
#include "urbscale/spectrum.hpp"
#include "urbscale_app/commands.hpp"

namespace urbscale::app {

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  res.status = status;
  res.set_content(Json{{"code", code}, {"message", msg}}.dump(), kJson);
}

void send_json(httplib::Response& res, const std::string& body) {
  res.status = 200;
  res.set_content(body, kJson);
}

std::optional<int> parse_grid(const std::string& s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 2 || v > 1000) return std::nullopt;
  return v;
}

bool is_dependent(CityVariable v) {
  return v == CityVariable::gas_per_area || v == CityVariable::co2_per_capita;
}

struct PlaneKey {
  CityVariable dependent;
  VariogramKind kind;
  int nx;
  int ny;
  auto operator<=>(const PlaneKey&) const = default;
};

struct PlaneEntry {
  std::once_flag once;
  std::shared_ptr<const PlanningPlane> plane;
  std::string body;
  std::string error;  // set when the plane could not be built
};

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;

  mutable std::mutex snapshot_mutex;
  std::shared_ptr<const Workspace> snapshot;

  std::mutex cache_mutex;
  std::map<PlaneKey, std::shared_ptr<PlaneEntry>> planes;

  std::shared_ptr<const Workspace> current() const {
    std::lock_guard lock(snapshot_mutex);
    return snapshot;
  }

  std::shared_ptr<PlaneEntry> plane(const Workspace& ws, const PlaneKey& key) {
    std::shared_ptr<PlaneEntry> entry;
    {
      std::lock_guard lock(cache_mutex);
      auto& slot = planes[key];
      if (!slot) slot = std::make_shared<PlaneEntry>();
      entry = slot;
    }
    std::call_once(entry->once, [&] {
      PlaneOptions opt;
      opt.nx = key.nx;
      opt.ny = key.ny;
      opt.kind = key.kind;
      try {
        auto built = std::make_shared<const PlanningPlane>(plane_for(ws, key.dependent, opt));
        auto j = to_json(*built);
        j["dependent"] = variable_name(key.dependent);
        entry->body = j.dump();
        entry->plane = std::move(built);
        spdlog::info("built plane for {} ({}x{})", variable_name(key.dependent), key.nx, key.ny);
      } catch (const std::exception& e) {
        entry->error = e.what();
      }
    });
    return entry;
  }

  // Returns null after sending 503 when no snapshot is loaded yet.
  std::shared_ptr<const Workspace> require_snapshot(httplib::Response& res) const {
    auto ws = current();
    if (!ws) send_error(res, 503, "not-loaded", "datasets are still loading");
    return ws;
  }

  void routes() {
    // The library default adds SO_REUSEPORT, which would let a second
    // instance share an occupied port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server.set_default_headers({{"X-Urbscale-Version", std::string(kSchemaVersion)}});

    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      auto ws = current();
      send_json(res, Json{{"status", "ok"},
                          {"version", kSchemaVersion},
                          {"loaded", ws != nullptr},
                          {"cities", ws ? ws->cities.size() : 0}}
                         .dump());
    });

    server.Get("/api/cities", [this](const httplib::Request&, httplib::Response& res) {
      auto ws = require_snapshot(res);
      if (!ws) return;
      Json cities = Json::array();
      for (const auto& c : ws->cities) {
        cities.push_back(Json{
            {"city_id", c.id()},
            {"status", status_name(c.report.status)},
            {"included", c.included()},
            {"ds", c.indicator ? Json(c.indicator->scaling.ds) : Json(nullptr)},
            {"mean_density", c.indicator ? Json(c.indicator->mean_density) : Json(nullptr)},
            {"relative_error", c.report.relative_error},
            {"failure", c.failure}});
      }
      send_json(res, Json{{"version", kSchemaVersion}, {"cities", std::move(cities)}}.dump());
    });

    server.Get("/api/plane", [this](const httplib::Request& req, httplib::Response& res) {
      auto ws = require_snapshot(res);
      if (!ws) return;
      PlaneKey key{CityVariable::gas_per_area, config.variogram, config.nx, config.ny};
      if (!req.has_param("dependent")) {
        return send_error(res, 400, "invalid-argument", "missing 'dependent' parameter");
      }
      auto dep = parse_variable(req.get_param_value("dependent"));
      if (!dep || !is_dependent(*dep)) {
        return send_error(res, 400, "unknown-dependent",
                          "dependent must be gas_per_area or co2_per_capita");
      }
      key.dependent = *dep;
      if (req.has_param("variogram")) {
        auto kind = parse_variogram(req.get_param_value("variogram"));
        if (!kind) return send_error(res, 400, "invalid-argument", "unknown variogram kind");
        key.kind = *kind;
      }
      for (auto [name, field] : {std::pair{"nx", &key.nx}, std::pair{"ny", &key.ny}}) {
        if (!req.has_param(name)) continue;
        auto v = parse_grid(req.get_param_value(name));
        if (!v) return send_error(res, 400, "invalid-argument", std::string(name) + " must be 2..1000");
        *field = *v;
      }
      auto entry = plane(*ws, key);
      if (!entry->plane) return send_error(res, 422, "insufficient-data", entry->error);
      send_json(res, entry->body);
    });

    server.Post("/api/scenario", [this](const httplib::Request& req, httplib::Response& res) {
      auto ws = require_snapshot(res);
      if (!ws) return;
      Json body;
      try {
        body = Json::parse(req.body);
      } catch (const Json::exception& e) {
        return send_error(res, 400, "malformed-document", e.what());
      }
      if (!body.is_object() || !body.contains("city_id") || !body["city_id"].is_string()) {
        return send_error(res, 400, "malformed-document", "body needs a string 'city_id'");
      }
      for (const auto& [k, v] : body.items()) {
        if (k != "city_id" && k != "delta" && k != "dependent") {
          return send_error(res, 400, "malformed-document", "unknown key '" + k + "'");
        }
      }
      ScenarioDelta delta;
      if (body.contains("delta")) {
        try {
          delta = scenario_delta_from_json(body["delta"]);
        } catch (const Error& e) {
          return send_error(res, 400, code_name(e.code()), e.what());
        }
      }
      PlaneKey key{CityVariable::gas_per_area, config.variogram, config.nx, config.ny};
      if (body.contains("dependent")) {
        auto dep = body["dependent"].is_string()
                       ? parse_variable(body["dependent"].get<std::string>())
                       : std::nullopt;
        if (!dep || !is_dependent(*dep)) {
          return send_error(res, 400, "unknown-dependent",
                            "dependent must be gas_per_area or co2_per_capita");
        }
        key.dependent = *dep;
      }
      const auto city_id = body["city_id"].get<std::string>();
      const auto* rec = ws->find(city_id);
      if (!rec) return send_error(res, 404, "unknown-city", "no city '" + city_id + "'");
      auto entry = plane(*ws, key);
      if (!entry->plane) return send_error(res, 422, "insufficient-data", entry->error);
      try {
        auto out = to_json(evaluate_scenario(rec->dataset, delta, *entry->plane,
                                             ws->options.classify));
        out["dependent"] = variable_name(key.dependent);
        send_json(res, out.dump());
      } catch (const Error& e) {
        send_error(res, 422, code_name(e.code()), e.what());
      }
    });

    server.Get("/api/spectrum", [this](const httplib::Request& req, httplib::Response& res) {
      auto ws = require_snapshot(res);
      if (!ws) return;
      if (!req.has_param("city_id")) {
        return send_error(res, 400, "invalid-argument", "missing 'city_id' parameter");
      }
      const auto city_id = req.get_param_value("city_id");
      const auto* rec = ws->find(city_id);
      if (!rec) return send_error(res, 404, "unknown-city", "no city '" + city_id + "'");
      try {
        auto classes = classify_city(rec->dataset, ws->options.classify);
        auto spectrum = fractal_spectrum(classes.aggregates, rec->id());
        send_json(res, Json{{"version", kSchemaVersion},
                            {"city_id", rec->id()},
                            {"bands", to_json(std::span<const SpectrumBand>(spectrum.bands))}}
                           .dump());
      } catch (const Error& e) {
        send_error(res, 422, code_name(e.code()), e.what());
      }
    });

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, 404, "not-found", "no route for " + req.path);
      } else {
        send_error(res, res.status, "http-error", httplib::status_message(res.status));
      }
    });

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string msg = "unexpected failure";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            msg = e.what();
          } catch (...) {
          }
          spdlog::error("request failed: {}", msg);
          send_error(res, 500, "internal", msg);
        });

    if (!config.static_dir.empty()) {
      if (!server.set_mount_point("/", config.static_dir.string())) {
        spdlog::warn("static directory {} not found; UI not served", config.static_dir.string());
      }
    }
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->routes();
}

Service::~Service() { stop(); }

void Service::load(std::shared_ptr<const Workspace> snapshot) {
  std::lock_guard lock(impl_->snapshot_mutex);
  impl_->snapshot = std::move(snapshot);
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void Service::stop() { impl_->server.stop(); }

}  // namespace urbscale::app
