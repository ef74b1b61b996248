#include "urbscale/error.hpp"

namespace urbscale {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::malformed_row: return "malformed-row";
    case ErrorCode::malformed_document: return "malformed-document";
    case ErrorCode::duplicate_id: return "duplicate-id";
    case ErrorCode::duplicate_city: return "duplicate-city";
    case ErrorCode::non_positive_area: return "non-positive-area";
    case ErrorCode::negative_population: return "negative-population";
    case ErrorCode::empty_city: return "empty-city";
    case ErrorCode::extrapolation_undefined: return "extrapolation-undefined";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::insufficient_classes: return "insufficient-classes";
    case ErrorCode::degenerate_spectrum: return "degenerate-spectrum";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::zero_variance: return "zero-variance";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::negative_variance: return "negative-variance";
    case ErrorCode::non_finite_query: return "non-finite-query";
    case ErrorCode::unknown_id: return "unknown-id";
    case ErrorCode::id_collision: return "id-collision";
  }
  return "unknown";
}

}  // namespace urbscale
