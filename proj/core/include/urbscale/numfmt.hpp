#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace urbscale {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Strict whole-field parses: no leading/trailing junk, no thousands separators.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int64(std::string_view text);

}  // namespace urbscale
