#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace urbscale {

/// Stable machine-readable failure categories. The kebab-case names returned
/// by code_name() appear in service error bodies and CLI messages.
enum class ErrorCode {
  invalid_argument,
  malformed_row,
  malformed_document,
  duplicate_id,
  duplicate_city,
  non_positive_area,
  negative_population,
  empty_city,
  extrapolation_undefined,
  infeasible,
  non_convergence,
  insufficient_classes,
  degenerate_spectrum,
  degenerate_input,
  insufficient_data,
  zero_variance,
  singular_system,
  negative_variance,
  non_finite_query,
  unknown_id,
  id_collision,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A row-level failure while reading a delimited file. Row numbers are
/// 1-based and count the header as row 1.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t row, const std::string& message)
      : Error(code, "row " + std::to_string(row) + ": " + message), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace urbscale
