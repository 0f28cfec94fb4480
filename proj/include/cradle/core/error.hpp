#pragma once

#include <stdexcept>
#include <string>

namespace cradle {

// Error codes shared across modules. Each maps 1:1 to a documented failure
// mode of some operation; tests match on the code, not the message.
enum class errc {
  // io
  release_not_held,
  already_held,
  duration_out_of_range,
  coordinate_out_of_bounds,
  unknown_key,
  backend_failure,
  // observation
  source_unavailable,
  empty_clip,
  region_out_of_bounds,
  invalid_target,
  // augmentation
  frame_too_narrow,
  segmenter_failure,
  template_larger_than_frame,
  // skill scripts
  syntax_error,
  duplicate_name,
  unknown_callee,
  arity_mismatch,
  kind_mismatch,
  recursion_rejected,
  repeat_out_of_range,
  label_not_found,
  expression_overflow,
  // procedural memory
  dimension_mismatch,
  not_found,
  format_version_mismatch,
  corrupt_entry,
  // episodic memory
  non_monotone_iteration,
  // provider
  provider_failure,
  rate_limited,
  timeout,
  cassette_miss,
  malformed_response,
  missing_field,
  unparsable_bool,
  // pipeline
  unknown_skill_chosen,
  malformed_call,
  // simenv
  scenario_parse_error,
  // harness
  empty_ledger,
  zero_denominator,
  division_by_zero,
  trajectory_parse_error,
  // cli
  digest_mismatch,
  config_error,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cradle
