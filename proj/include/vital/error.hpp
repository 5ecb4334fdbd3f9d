#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vital {

enum class ErrorCode {
  degenerate_span,
  unknown_format,
  ambiguous_format,
  parse_error,
  schema_error,
  encoding_error,
  unknown_stage,
  invalid_value,
  internal_consistency,
  empty_dataset,
  invalid_config,
  invariant_violation,
  not_found,
  bad_request,
  unauthorized,
  conflict,
  integration_failed,
  integrity_error,
  io_error,
};

// Stable kebab-case name used in diagnostics and API error bodies.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vital
