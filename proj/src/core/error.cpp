#include "cradle/core/error.hpp"

namespace cradle {

const char* errc_name(errc code) {
  switch (code) {
    case errc::release_not_held: return "ReleaseNotHeld";
    case errc::already_held: return "AlreadyHeld";
    case errc::duration_out_of_range: return "DurationOutOfRange";
    case errc::coordinate_out_of_bounds: return "CoordinateOutOfBounds";
    case errc::unknown_key: return "UnknownKey";
    case errc::backend_failure: return "BackendFailure";
    case errc::source_unavailable: return "SourceUnavailable";
    case errc::empty_clip: return "EmptyClip";
    case errc::region_out_of_bounds: return "RegionOutOfBounds";
    case errc::invalid_target: return "InvalidTarget";
    case errc::frame_too_narrow: return "FrameTooNarrow";
    case errc::segmenter_failure: return "SegmenterFailure";
    case errc::template_larger_than_frame: return "TemplateLargerThanFrame";
    case errc::syntax_error: return "SyntaxError";
    case errc::duplicate_name: return "DuplicateName";
    case errc::unknown_callee: return "UnknownCallee";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::kind_mismatch: return "KindMismatch";
    case errc::recursion_rejected: return "RecursionRejected";
    case errc::repeat_out_of_range: return "RepeatOutOfRange";
    case errc::label_not_found: return "LabelNotFound";
    case errc::expression_overflow: return "ExpressionOverflow";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_found: return "NotFound";
    case errc::format_version_mismatch: return "FormatVersionMismatch";
    case errc::corrupt_entry: return "CorruptEntry";
    case errc::non_monotone_iteration: return "NonMonotoneIteration";
    case errc::provider_failure: return "ProviderFailure";
    case errc::rate_limited: return "RateLimited";
    case errc::timeout: return "Timeout";
    case errc::cassette_miss: return "CassetteMiss";
    case errc::malformed_response: return "MalformedResponse";
    case errc::missing_field: return "MissingField";
    case errc::unparsable_bool: return "UnparsableBool";
    case errc::unknown_skill_chosen: return "UnknownSkillChosen";
    case errc::malformed_call: return "MalformedCall";
    case errc::scenario_parse_error: return "ScenarioParseError";
    case errc::empty_ledger: return "EmptyLedger";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::trajectory_parse_error: return "TrajectoryParseError";
    case errc::digest_mismatch: return "DigestMismatch";
    case errc::config_error: return "ConfigError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace cradle
