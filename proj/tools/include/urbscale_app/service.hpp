#pragma once

// JSON-over-HTTP facade over a loaded workspace.

#include <filesystem>
#include <memory>
#include <string>

#include "urbscale/scaling.hpp"
#include "urbscale/variogram.hpp"
#include "urbscale_app/workspace.hpp"

namespace urbscale::app {

struct ServiceConfig {
  VariogramKind variogram = VariogramKind::exponential;
  int nx = 100;
  int ny = 100;
  std::filesystem::path static_dir;  // served at "/" when set
};

/// Endpoints:
///   GET  /api/health
///   GET  /api/cities
///   GET  /api/plane?dependent=gas_per_area|co2_per_capita[&variogram=..][&nx=..&ny=..]
///   POST /api/scenario  {"city_id": .., "delta": {..}, "dependent": ..}
///   GET  /api/spectrum?city_id=..
/// Errors are {"code", "message"} bodies. Planes are built on first request
/// and cached per (dependent, variogram, nx, ny) until shutdown.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Publishes the snapshot. Until then data endpoints answer 503.
  void load(std::shared_ptr<const Workspace> snapshot);

  /// Binds to host:port (port 0 picks a free port). Returns the bound port,
  /// or -1 when the address is unavailable.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Returns false if the listener failed.
  bool run();
  /// Blocks until run() is accepting connections or has failed.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace urbscale::app
