#pragma once

#include <string>

#include "cradle/pipeline/profile.hpp"
#include "cradle/pipeline/runner.hpp"

namespace cradle::cli {

inline constexpr const char* kTrajectorySchema = "trajectory/1";

/// JSONL: schema header, preamble events, one line per iteration, footer
/// with the final clock tick and render digest.
void write_trajectory(const std::string& path, const pipeline::Profile& profile,
                      const pipeline::RunOutcome& outcome);

struct ReplayResult {
  bool ok = false;
  std::string message;  // mismatch details when !ok
};

/// Replays the recorded event log against a scenario and verifies the
/// per-iteration and final render digests.
ReplayResult replay_trajectory(const std::string& trajectory_path,
                               const std::string& scenario_path);

}  // namespace cradle::cli
