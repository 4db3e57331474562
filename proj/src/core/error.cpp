#include "cryptacc/error.hpp"

namespace cryptacc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unsupported_lambda: return "unsupported-lambda";
    case ErrorCode::unsupported_scheme: return "unsupported-scheme";
    case ErrorCode::unsupported_operation: return "scheme-unsupported-operation";
    case ErrorCode::capacity_exceeded: return "capacity-exceeded";
    case ErrorCode::duplicate_element: return "duplicate-element";
    case ErrorCode::key_mismatch: return "key-mismatch";
    case ErrorCode::trapdoor_missing: return "trapdoor-missing";
    case ErrorCode::not_a_member: return "not-a-member";
    case ErrorCode::element_is_member: return "element-is-member";
    case ErrorCode::not_invertible: return "x-not-invertible";
    case ErrorCode::not_coprime: return "not-coprime";
    case ErrorCode::key_compromise: return "key-compromise";
    case ErrorCode::search_exhausted: return "representative-search-exhausted";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::stale_event: return "stale-event";
    case ErrorCode::invalid_scenario: return "invalid-scenario";
    case ErrorCode::mismatched_event_lists: return "mismatched-event-lists";
    case ErrorCode::insufficient_samples: return "insufficient-samples";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace cryptacc
