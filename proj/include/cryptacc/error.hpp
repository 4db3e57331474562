#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cryptacc {

enum class ErrorCode {
  unsupported_lambda,
  unsupported_scheme,
  unsupported_operation,
  capacity_exceeded,
  duplicate_element,
  key_mismatch,
  trapdoor_missing,
  not_a_member,
  element_is_member,
  not_invertible,
  not_coprime,
  key_compromise,
  search_exhausted,
  index_out_of_range,
  stale_event,
  invalid_scenario,
  mismatched_event_lists,
  insufficient_samples,
  domain_error,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class AccumulatorError : public std::runtime_error {
 public:
  AccumulatorError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cryptacc
