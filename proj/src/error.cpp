#include "vital/error.hpp"

namespace vital {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_span: return "degenerate-span";
    case ErrorCode::unknown_format: return "unknown-format";
    case ErrorCode::ambiguous_format: return "ambiguous-format";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::schema_error: return "schema-error";
    case ErrorCode::encoding_error: return "encoding-error";
    case ErrorCode::unknown_stage: return "unknown-stage";
    case ErrorCode::invalid_value: return "invalid-value";
    case ErrorCode::internal_consistency: return "internal-consistency";
    case ErrorCode::empty_dataset: return "empty-dataset";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::invariant_violation: return "invariant-violation";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::bad_request: return "bad-request";
    case ErrorCode::unauthorized: return "unauthorized";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::integration_failed: return "integration-failed";
    case ErrorCode::integrity_error: return "integrity-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace vital
