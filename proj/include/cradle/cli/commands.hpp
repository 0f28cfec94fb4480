#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cradle::cli {

// Exit codes: 0 = success, 1 = run/verification failure, 2 = config error.

struct RunOptions {
  std::string profile_path;
  std::optional<int> max_steps;
  std::optional<std::string> cassette;
  std::optional<std::string> cassette_mode;  // strict | record
  std::string trajectory_out = "trajectory.jsonl";
  std::optional<std::string> skills_out;  // persist the final skill store
  bool quiet = false;
};

int cmd_run(const RunOptions& options);

int cmd_replay(const std::string& trajectory_path, const std::string& scenario_path);

int cmd_skills_list(const std::string& store_path);
int cmd_skills_show(const std::string& store_path, const std::string& name);
int cmd_skills_lint(const std::string& script_path);

struct MetricsOptions {
  std::string ledger_path;                  // trade metrics from a ledger CSV
  std::vector<std::string> trajectories;    // success stats over runs
  std::optional<double> expected_steps;     // adds the efficiency line
  bool as_json = false;
};

int cmd_metrics(const MetricsOptions& options);

struct AugmentOptions {
  std::string input_png;
  std::string output_dir = ".";
  bool grid = false;
  bool bands = false;
  bool som = false;
  std::optional<std::pair<int, int>> pointer;
  std::string match_templates_dir;  // print template detections
};

int cmd_augment(const AugmentOptions& options);

}  // namespace cradle::cli
