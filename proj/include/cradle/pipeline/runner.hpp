#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cradle/aug/ops.hpp"
#include "cradle/emem/store.hpp"
#include "cradle/io/executor.hpp"
#include "cradle/llm/provider.hpp"
#include "cradle/obs/capture.hpp"
#include "cradle/pipeline/profile.hpp"
#include "cradle/pipeline/prompts.hpp"
#include "cradle/pipeline/task.hpp"
#include "cradle/pmem/store.hpp"
#include "cradle/sim/env.hpp"

namespace cradle::pipeline {

struct GatheredInfo {
  std::vector<std::string> keyframe_texts;
  std::string last_frame_description;
  std::optional<aug::MarkSet> marks;
  std::vector<std::int64_t> keyframe_ids;
  std::int64_t last_frame_id = -1;
};

struct PlannedAction {
  std::vector<skill::SkillCall> calls;
  std::string reasoning;
  bool infeasible = false;
};

struct IterationRecord {
  std::int64_t iteration = 0;
  Tick tick_start = 0;
  Tick tick_end = 0;
  GatheredInfo gathered;
  ReflectionOutcome reflection;
  TaskSpec task;
  PlannedAction action;
  std::vector<std::string> new_skills;
  std::vector<std::string> retrieved;
  std::vector<io::ExecReport> reports;
  std::vector<io::RecordingBackend::Entry> events;
  std::vector<std::string> errors;  // non-fatal stage errors
  std::string render_digest;        // env digest after execution
  std::string summary_text;
};

struct RunOutcome {
  int steps_used = 0;
  bool success = false;
  std::string reason;  // goal | infeasible | max_steps | aborted
  std::vector<IterationRecord> iterations;
  // events emitted before the first iteration (initial pause, toolbar
  // exploration) and after the last one (final release)
  std::vector<io::RecordingBackend::Entry> preamble_events;
  std::vector<io::RecordingBackend::Entry> final_events;
  std::vector<std::string> generated_skills;  // from toolbar exploration
  std::string final_render_digest;
  Tick final_tick = 0;
};

/// One agent run over the simulated environment: the six-stage loop
/// (information gathering, self-reflection, task inference, skill curation,
/// action planning, execution) with pause-bracketed actions, dual memories
/// and per-iteration records.
class Runner {
 public:
  Runner(Profile profile, llm::Provider& provider);
  ~Runner();

  RunOutcome run();

  /// Hover-driven skill generation over toolbar items (two levels deep).
  /// Items whose tooltip the provider marks unselectable are skipped.
  /// Returns the names of the skills that were registered.
  std::vector<std::string> explore_toolbar(
      const std::vector<Rect>& item_rects = {});

  sim::SimEnv& env() { return *env_; }
  pmem::SkillStore& store() { return *store_; }
  emem::EpisodicStore& episodic() { return *episodic_; }
  SimClock& clock() { return *clock_; }
  const Profile& profile() const { return profile_; }
  io::Executor& executor() { return *executor_; }

  // individual stages, driven by run() and exercised directly in tests
  GatheredInfo stage_gather(const obs::VideoClip& clip);
  ReflectionOutcome stage_reflect(const obs::VideoClip& clip,
                                  std::int64_t iteration);
  TaskSpec stage_infer_task(const ReflectionOutcome& reflection,
                            const GatheredInfo& gathered, std::int64_t iteration);
  std::pair<std::vector<std::string>, std::vector<std::string>> stage_curate(
      const TaskSpec& task, const GatheredInfo& gathered, std::int64_t iteration);
  PlannedAction stage_plan(const TaskSpec& task,
                           const std::vector<std::string>& retrieved,
                           const GatheredInfo& gathered,
                           const std::vector<std::string>& new_skills,
                           std::int64_t iteration);
  std::vector<io::ExecReport> stage_execute(const PlannedAction& action,
                                            IterationRecord& record);

 private:
  void bootstrap_frames();
  void register_builtins();
  void load_presets();
  std::string complete_stage(const StagePrompt& stage,
                             const std::map<std::string, std::string>& vars,
                             const std::map<std::string, std::vector<Image>>& images,
                             llm::SectionValues* out_sections);
  std::map<std::string, std::string> base_vars(std::int64_t iteration) const;
  void unpause_env();
  void pause_env();
  Image current_frame() const;

  Profile profile_;
  llm::Provider& provider_;

  std::unique_ptr<SimClock> clock_;
  std::unique_ptr<sim::SimEnv> env_;
  std::unique_ptr<io::RecordingBackend> recorder_;
  std::unique_ptr<io::Executor> executor_;
  std::unique_ptr<obs::Capture> capture_;
  std::unique_ptr<pmem::SkillStore> store_;
  std::unique_ptr<emem::EpisodicStore> episodic_;
  PromptSet prompts_;
  TaskStack tasks_;
  io::PauseStrategy pause_strategy_;
  std::optional<aug::MarkSet> last_marks_;
  std::vector<skill::SkillCall> last_action_calls_;
  std::vector<std::string> pending_errors_;
  bool env_paused_ = false;
};

}  // namespace cradle::pipeline
