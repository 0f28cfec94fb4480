#include <string>

#include "CLI11.hpp"
#include "cradle/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cradle - general computer control agent runtime"};
  app.require_subcommand(1);

  // run
  cradle::cli::RunOptions run_opts;
  int run_max_steps = -1;
  std::string run_cassette, run_cassette_mode;
  auto* run = app.add_subcommand("run", "execute an agent run from a profile");
  run->add_option("--profile", run_opts.profile_path, "profile file")->required();
  run->add_option("--max-steps", run_max_steps, "override the profile step cap");
  run->add_option("--cassette", run_cassette, "cassette file for record/replay");
  auto* strict = run->add_flag("--strict", "cassette misses are errors");
  auto* record = run->add_flag("--record", "record provider traffic into the cassette");
  run->add_option("--out", run_opts.trajectory_out, "trajectory output path");
  std::string run_skills_out;
  run->add_option("--skills-out", run_skills_out,
                  "persist the final skill store to this file");
  run->add_flag("--quiet", run_opts.quiet, "suppress the summary line");

  // replay
  std::string replay_trajectory, replay_scenario;
  auto* replay = app.add_subcommand("replay", "verify a recorded trajectory");
  replay->add_option("--trajectory", replay_trajectory, "trajectory file")->required();
  replay->add_option("--scenario", replay_scenario, "scenario file")->required();

  // skills
  auto* skills = app.add_subcommand("skills", "inspect skill stores and scripts");
  std::string skills_store, skills_name, skills_lint_path;
  auto* skills_list = skills->add_subcommand("list", "list skills in a store");
  skills_list->add_option("--store", skills_store, "skill store file")->required();
  auto* skills_show = skills->add_subcommand("show", "print one skill");
  skills_show->add_option("--store", skills_store, "skill store file")->required();
  skills_show->add_option("name", skills_name, "skill name")->required();
  auto* skills_lint = skills->add_subcommand("lint", "parse and validate a script file");
  skills_lint->add_option("path", skills_lint_path, "skill script file")->required();
  skills->require_subcommand(1);

  // metrics
  cradle::cli::MetricsOptions metrics_opts;
  double expected_steps = -1;
  auto* metrics = app.add_subcommand("metrics", "evaluate runs and trade ledgers");
  metrics->add_option("--ledger", metrics_opts.ledger_path, "trade ledger CSV");
  metrics->add_option("--trajectory", metrics_opts.trajectories,
                      "trajectory file (repeatable)");
  metrics->add_option("--expected-steps", expected_steps,
                      "expected steps for the efficiency line");
  metrics->add_flag("--json", metrics_opts.as_json, "JSON output");

  // augment
  cradle::cli::AugmentOptions aug_opts;
  std::vector<int> pointer_xy;
  auto* augment = app.add_subcommand("augment", "batch image augmentation");
  augment->add_option("input", aug_opts.input_png, "input PNG")->required();
  augment->add_option("--out", aug_opts.output_dir, "output directory");
  augment->add_flag("--grid", aug_opts.grid, "draw the coordinate grid");
  augment->add_flag("--bands", aug_opts.bands, "draw side color bands");
  augment->add_flag("--som", aug_opts.som, "segment and render marks");
  augment->add_option("--pointer", pointer_xy, "draw the pointer at x y")
      ->expected(2);
  augment->add_option("--match", aug_opts.match_templates_dir,
                      "match all templates from this directory");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (run_max_steps > 0) run_opts.max_steps = run_max_steps;
    if (!run_cassette.empty()) run_opts.cassette = run_cassette;
    if (!run_skills_out.empty()) run_opts.skills_out = run_skills_out;
    if (*strict) run_opts.cassette_mode = "strict";
    if (*record) run_opts.cassette_mode = "record";
    return cradle::cli::cmd_run(run_opts);
  }
  if (replay->parsed())
    return cradle::cli::cmd_replay(replay_trajectory, replay_scenario);
  if (skills->parsed()) {
    if (skills_list->parsed()) return cradle::cli::cmd_skills_list(skills_store);
    if (skills_show->parsed())
      return cradle::cli::cmd_skills_show(skills_store, skills_name);
    if (skills_lint->parsed())
      return cradle::cli::cmd_skills_lint(skills_lint_path);
  }
  if (metrics->parsed()) {
    if (expected_steps > 0) metrics_opts.expected_steps = expected_steps;
    return cradle::cli::cmd_metrics(metrics_opts);
  }
  if (augment->parsed()) {
    if (pointer_xy.size() == 2)
      aug_opts.pointer = std::make_pair(pointer_xy[0], pointer_xy[1]);
    return cradle::cli::cmd_augment(aug_opts);
  }
  return 2;
}
