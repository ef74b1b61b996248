#include "urbscale_app/workspace.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "urbscale/error.hpp"

namespace urbscale::app {

namespace fs = std::filesystem;

std::optional<double> CityRecord::gas_per_area() const {
  const auto& obs = dataset.observables();
  if (!has_energy_observables(obs)) return std::nullopt;
  return extrapolate_sales(obs) / dataset.total_area();
}

std::optional<double> CityRecord::co2_per_capita() const {
  return dataset.observables().co2_road_per_capita;
}

std::optional<double> CityRecord::dependent(CityVariable v) const {
  switch (v) {
    case CityVariable::gas_per_area: return gas_per_area();
    case CityVariable::co2_per_capita: return co2_per_capita();
    case CityVariable::ds: return indicator ? std::optional(indicator->scaling.ds) : std::nullopt;
    case CityVariable::mean_density:
      return indicator ? std::optional(indicator->mean_density) : std::nullopt;
  }
  return std::nullopt;
}

CityRow CityRecord::row() const {
  CityRow r;
  r.city_id = id();
  if (indicator) {
    r.ds = indicator->scaling.ds;
    r.mean_density = indicator->mean_density;
  }
  r.gas_per_area = gas_per_area();
  r.co2_per_capita = co2_per_capita();
  return r;
}

const CityRecord* Workspace::find(std::string_view city_id) const noexcept {
  auto it = std::lower_bound(cities.begin(), cities.end(), city_id,
                             [](const CityRecord& r, std::string_view id) { return r.id() < id; });
  return it != cities.end() && it->id() == city_id ? &*it : nullptr;
}

std::vector<CityRow> Workspace::included_rows() const {
  std::vector<CityRow> rows;
  for (const auto& c : cities) {
    if (c.included()) rows.push_back(c.row());
  }
  return rows;
}

std::vector<SamplePoint> Workspace::plane_samples(CityVariable dependent) const {
  std::vector<SamplePoint> out;
  for (const auto& c : cities) {
    if (!c.included()) continue;
    auto z = c.dependent(dependent);
    if (!z) continue;
    out.push_back({c.indicator->mean_density, c.indicator->scaling.ds, *z});
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AppError(kExitInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

CityRecord load_city(const fs::path& file, const ObservablesRow& row, const LoadOptions& opt) {
  const std::string text = read_file(file);
  std::optional<CityDataset> ds;
  try {
    ds.emplace(parse_city(text, row));
  } catch (const ParseError& e) {
    throw AppError(kExitFormat, file.filename().string() + ": " + e.what());
  } catch (const Error& e) {
    throw AppError(kExitFormat, file.filename().string() + ": " + e.what());
  }
  CityRecord rec{std::move(*ds), {}, std::nullopt, {}};
  rec.report = validate_city(rec.dataset, opt.tolerance);
  try {
    rec.indicator = city_indicator(rec.dataset, opt.classify);
  } catch (const Error& e) {
    rec.failure = std::string(code_name(e.code()));
    spdlog::info("{}: no indicator ({})", rec.id(), e.what());
  }
  return rec;
}

}  // namespace

Workspace load_workspace(const LoadOptions& options) {
  std::error_code ec;
  if (options.blocks_dir.empty() || !fs::is_directory(options.blocks_dir, ec)) {
    throw AppError(kExitInput, "blocks directory not found: " + options.blocks_dir.string());
  }
  if (options.observables.empty() || !fs::is_regular_file(options.observables, ec)) {
    throw AppError(kExitInput, "observables file not found: " + options.observables.string());
  }
  if (options.tolerance < 0.0) throw AppError(kExitInput, "tolerance must be non-negative");
  if (options.classify.classes < 3) throw AppError(kExitInput, "--classes must be at least 3");

  std::map<std::string, fs::path> files;
  std::unordered_map<std::string, std::string> folded;
  for (const auto& entry : fs::directory_iterator(options.blocks_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    const std::string id = entry.path().stem().string();
    auto [it, fresh] = folded.emplace(lower(id), id);
    if (!fresh) {
      throw AppError(kExitFormat, "duplicate city files '" + it->second + ".csv' and '" + id + ".csv'");
    }
    files.emplace(id, entry.path());
  }
  if (files.empty()) {
    throw AppError(kExitInput, "no city files in " + options.blocks_dir.string());
  }

  std::vector<ObservablesRow> obs_rows;
  try {
    obs_rows = parse_observables(read_file(options.observables));
  } catch (const Error& e) {
    throw AppError(kExitFormat, options.observables.filename().string() + ": " + e.what());
  }
  std::unordered_map<std::string, const ObservablesRow*> by_id;
  for (const auto& r : obs_rows) by_id.emplace(r.city_id, &r);

  Workspace ws;
  ws.options = options;
  std::vector<std::pair<fs::path, const ObservablesRow*>> work;
  for (const auto& [id, path] : files) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw AppError(kExitFormat, "city '" + id + "' has no row in the observables file");
    }
    work.emplace_back(path, it->second);
  }
  for (const auto& r : obs_rows) {
    if (!files.contains(r.city_id)) {
      ws.warnings.push_back("observables row for '" + r.city_id + "' has no block file");
      spdlog::warn("{}", ws.warnings.back());
    }
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned jobs = std::min<unsigned>(options.jobs ? options.jobs : hw,
                                           static_cast<unsigned>(work.size()));
  std::vector<std::optional<CityRecord>> results(work.size());
  std::vector<std::exception_ptr> errors(work.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
          try {
            results[i].emplace(load_city(work[i].first, *work[i].second, options));
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  // Report the first failing file in name order, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ws.cities.reserve(results.size());
  for (auto& r : results) ws.cities.push_back(std::move(*r));
  spdlog::info("loaded {} cities from {}", ws.cities.size(), options.blocks_dir.string());
  return ws;
}

}  // namespace urbscale::app
