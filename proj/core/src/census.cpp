#include "urbscale/census.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_set>

#include "urbscale/error.hpp"
#include "urbscale/numfmt.hpp"

namespace urbscale {
namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back({number, line});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  for (;;) {
    auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::optional<double> optional_field(std::string_view field, std::size_t row, const char* name) {
  if (field.empty()) return std::nullopt;
  auto value = parse_double(field);
  if (!value || *value < 0.0) {
    throw ParseError(ErrorCode::malformed_row, row,
                     std::string(name) + " must be a non-negative number, got '" +
                         std::string(field) + "'");
  }
  return value;
}

void append_optional(std::string& out, const std::optional<double>& value) {
  out += ',';
  if (value) out += format_double(*value);
}

}  // namespace

CityDataset::CityDataset(std::string city_id, std::vector<Block> blocks,
                         std::int64_t reported_population, CityObservables observables)
    : city_id_(std::move(city_id)),
      blocks_(std::move(blocks)),
      reported_population_(reported_population),
      observables_(observables) {
  if (blocks_.empty()) {
    throw Error(ErrorCode::empty_city, "city '" + city_id_ + "' has no blocks");
  }
  if (reported_population_ <= 0) {
    throw Error(ErrorCode::invalid_argument,
                "city '" + city_id_ + "' reported population must be positive");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& b : blocks_) {
    if (!(b.area_km2 > 0.0) || !std::isfinite(b.area_km2)) {
      throw Error(ErrorCode::non_positive_area, "block '" + b.block_id + "' has non-positive area");
    }
    if (b.population < 0) {
      throw Error(ErrorCode::negative_population,
                  "block '" + b.block_id + "' has negative population");
    }
    if (!seen.insert(b.block_id).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate block id '" + b.block_id + "'");
    }
  }
}

std::int64_t CityDataset::total_population() const noexcept {
  std::int64_t total = 0;
  for (const auto& b : blocks_) total += b.population;
  return total;
}

double CityDataset::total_area() const noexcept {
  double total = 0.0;
  for (const auto& b : blocks_) total += b.area_km2;
  return total;
}

double CityDataset::populated_area() const noexcept {
  double total = 0.0;
  for (const auto& b : blocks_) {
    if (b.population > 0) total += b.area_km2;
  }
  return total;
}

std::size_t CityDataset::zero_population_blocks() const noexcept {
  std::size_t count = 0;
  for (const auto& b : blocks_) count += b.population == 0 ? 1 : 0;
  return count;
}

std::string_view status_name(ValidationStatus status) noexcept {
  switch (status) {
    case ValidationStatus::included: return "included";
    case ValidationStatus::excluded_population_mismatch: return "excluded_population_mismatch";
    case ValidationStatus::excluded_missing_energy: return "excluded_missing_energy";
  }
  return "unknown";
}

std::vector<Block> parse_blocks(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines.front().text != kBlockCsvHeader) {
    throw ParseError(ErrorCode::malformed_row, lines.empty() ? 1 : lines.front().number,
                     "expected header '" + std::string(kBlockCsvHeader) + "'");
  }
  std::vector<Block> blocks;
  blocks.reserve(lines.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = lines[i].number;
    auto fields = split_fields(lines[i].text);
    if (fields.size() != 3) {
      throw ParseError(ErrorCode::malformed_row, row,
                       "expected 3 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(ErrorCode::malformed_row, row, "empty block_id");
    auto area = parse_double(fields[1]);
    if (!area) {
      throw ParseError(ErrorCode::malformed_row, row,
                       "area_km2 is not a number: '" + std::string(fields[1]) + "'");
    }
    if (*area <= 0.0) {
      throw ParseError(ErrorCode::non_positive_area, row,
                       "non-positive area " + std::string(fields[1]));
    }
    auto population = parse_int64(fields[2]);
    if (!population) {
      throw ParseError(ErrorCode::malformed_row, row,
                       "population is not an integer: '" + std::string(fields[2]) + "'");
    }
    if (*population < 0) {
      throw ParseError(ErrorCode::negative_population, row,
                       "negative population " + std::string(fields[2]));
    }
    std::string id(fields[0]);
    if (!seen.insert(id).second) {
      throw ParseError(ErrorCode::duplicate_id, row, "duplicate block_id '" + id + "'");
    }
    blocks.push_back(Block{std::move(id), *area, *population});
  }
  if (blocks.empty()) {
    throw Error(ErrorCode::empty_city, "block table has no data rows");
  }
  return blocks;
}

CityDataset parse_city(std::string_view text, std::string city_id) {
  auto blocks = parse_blocks(text);
  std::int64_t total = 0;
  for (const auto& b : blocks) total += b.population;
  return CityDataset(std::move(city_id), std::move(blocks), std::max<std::int64_t>(total, 1));
}

CityDataset parse_city(std::string_view text, const ObservablesRow& row) {
  return CityDataset(row.city_id, parse_blocks(text), row.reported_population, row.observables);
}

std::string serialize_blocks(std::span<const Block> blocks) {
  std::string out(kBlockCsvHeader);
  out += '\n';
  for (const auto& b : blocks) {
    out += b.block_id;
    out += ',';
    out += format_double(b.area_km2);
    out += ',';
    out += std::to_string(b.population);
    out += '\n';
  }
  return out;
}

std::vector<ObservablesRow> parse_observables(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines.front().text != kObservablesCsvHeader) {
    throw ParseError(ErrorCode::malformed_row, lines.empty() ? 1 : lines.front().number,
                     "expected header '" + std::string(kObservablesCsvHeader) + "'");
  }
  std::vector<ObservablesRow> rows;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = lines[i].number;
    auto fields = split_fields(lines[i].text);
    if (fields.size() != 6) {
      throw ParseError(ErrorCode::malformed_row, row,
                       "expected 6 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(ErrorCode::malformed_row, row, "empty city_id");
    auto reported = parse_int64(fields[1]);
    if (!reported || *reported <= 0) {
      throw ParseError(ErrorCode::malformed_row, row,
                       "reported_population must be a positive integer, got '" +
                           std::string(fields[1]) + "'");
    }
    ObservablesRow parsed;
    parsed.city_id = std::string(fields[0]);
    parsed.reported_population = *reported;
    parsed.observables.gas_sales_2007 = optional_field(fields[2], row, "gas_sales_2007_usd");
    parsed.observables.payroll_2007 = optional_field(fields[3], row, "payroll_2007_usd");
    parsed.observables.payroll_2010 = optional_field(fields[4], row, "payroll_2010_usd");
    parsed.observables.co2_road_per_capita = optional_field(fields[5], row, "co2_road_tpc");
    if (!seen.insert(parsed.city_id).second) {
      throw ParseError(ErrorCode::duplicate_city, row,
                       "duplicate city_id '" + parsed.city_id + "'");
    }
    rows.push_back(std::move(parsed));
  }
  return rows;
}

std::string serialize_observables(std::span<const ObservablesRow> rows) {
  std::string out(kObservablesCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.city_id;
    out += ',';
    out += std::to_string(r.reported_population);
    append_optional(out, r.observables.gas_sales_2007);
    append_optional(out, r.observables.payroll_2007);
    append_optional(out, r.observables.payroll_2010);
    append_optional(out, r.observables.co2_road_per_capita);
    out += '\n';
  }
  return out;
}

bool has_energy_observables(const CityObservables& obs) noexcept {
  return obs.gas_sales_2007.has_value() && obs.payroll_2007.has_value() &&
         obs.payroll_2010.has_value() && *obs.payroll_2007 > 0.0;
}

ValidationReport validate_city(const CityDataset& dataset, double tolerance) {
  ValidationReport report;
  report.city_id = dataset.city_id();
  report.computed_population = dataset.total_population();
  report.reported_population = dataset.reported_population();
  report.relative_error =
      static_cast<double>(std::llabs(report.computed_population - report.reported_population)) /
      static_cast<double>(report.reported_population);
  if (!(report.relative_error <= tolerance)) {
    report.status = ValidationStatus::excluded_population_mismatch;
  } else if (!has_energy_observables(dataset.observables())) {
    report.status = ValidationStatus::excluded_missing_energy;
  } else {
    report.status = ValidationStatus::included;
  }
  return report;
}

double extrapolate_sales(const CityObservables& obs) {
  if (!obs.gas_sales_2007 || !obs.payroll_2007 || !obs.payroll_2010) {
    throw Error(ErrorCode::extrapolation_undefined,
                "gasoline sales extrapolation needs 2007 sales and 2007/2010 payrolls");
  }
  if (!(*obs.payroll_2007 > 0.0)) {
    throw Error(ErrorCode::extrapolation_undefined, "2007 payroll is zero");
  }
  return *obs.gas_sales_2007 * (*obs.payroll_2010 / *obs.payroll_2007);
}

}  // namespace urbscale
