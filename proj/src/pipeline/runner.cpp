#include "cradle/pipeline/runner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cradle/core/hash.hpp"
#include "cradle/core/text.hpp"
#include "cradle/obs/ops.hpp"
#include "cradle/skill/parser.hpp"

namespace cradle::pipeline {
namespace {

constexpr const char* kInfeasibleSkill = "task_is_not_feasible";

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

Runner::Runner(Profile profile, llm::Provider& provider)
    : profile_(std::move(profile)),
      provider_(provider),
      prompts_(PromptSet::load(profile_.prompts_dir)),
      tasks_(profile_.short_task_window),
      pause_strategy_(io::parse_pause_strategy(profile_.pause)) {
  validate_profile(profile_);

  clock_ = std::make_unique<SimClock>(profile_.ticks_per_second);
  env_ = std::make_unique<sim::SimEnv>(sim::SimEnv::load_scenario(profile_.scenario));
  env_->attach_clock(*clock_);
  recorder_ = std::make_unique<io::RecordingBackend>(*env_);

  io::IoConfig io_config;
  io_config.screen = {env_->screen_width(), env_->screen_height()};
  executor_ = std::make_unique<io::Executor>(*recorder_, *clock_, io_config);

  obs::CaptureConfig cap;
  cap.fps = profile_.fps;
  cap.ring_capacity = static_cast<std::size_t>(profile_.ring_capacity);
  cap.downscale_width = profile_.downscale_width;
  capture_ = std::make_unique<obs::Capture>(*env_, *clock_, cap);

  store_ = std::make_unique<pmem::SkillStore>(profile_.embed_dim());
  episodic_ = std::make_unique<emem::EpisodicStore>(profile_.episodic_k,
                                                    profile_.sentence_cap);

  register_builtins();
  load_presets();

  tasks_.push(TaskSpec{profile_.initial_task, Horizon::long_horizon, 0}, 0);
}

Runner::~Runner() {
  if (env_) env_->detach_clock();
  if (capture_) capture_->stop();
}

void Runner::register_builtins() {
  skill::NativeSkill infeasible;
  infeasible.name = kInfeasibleSkill;
  infeasible.doc = "Declare that the current task cannot be completed.";
  infeasible.expand = [](const std::vector<skill::Value>&,
                         const skill::CompileContext&) {
    return std::vector<io::ActionPrimitive>{};
  };
  store_->add_native(std::move(infeasible), provider_);
}

void Runner::load_presets() {
  for (const auto& path : profile_.presets) {
    for (auto& script : skill::parse_many(read_text_file(path))) {
      auto issues = skill::validate(script, *store_);
      if (!issues.empty())
        raise(errc::config_error,
              "preset '" + script.name + "' in " + path + ": " + issues[0].message);
      store_->add_script(std::move(script), provider_, pmem::SkillSource::predefined,
                         0);
    }
  }
}

void Runner::unpause_env() {
  if (!env_paused_) return;
  executor_->unpause(pause_strategy_);
  env_paused_ = false;
}

void Runner::pause_env() {
  if (env_paused_) return;
  executor_->pause(pause_strategy_);
  env_paused_ = true;
}

Image Runner::current_frame() const { return env_->render(); }

void Runner::bootstrap_frames() {
  if (capture_->frames_since_marker() > 0) return;
  Tick per_frame = std::max<Tick>(
      1, static_cast<Tick>(std::llround(profile_.ticks_per_second / profile_.fps)));
  unpause_env();
  clock_->advance(per_frame);
  pause_env();
}

std::map<std::string, std::string> Runner::base_vars(std::int64_t iteration) const {
  std::map<std::string, std::string> vars;
  vars["iteration"] = std::to_string(iteration);
  vars["task"] = tasks_.active() ? tasks_.active()->description : "(none)";
  vars["summary"] = episodic_->summary().text.empty() ? "(empty)"
                                                      : episodic_->summary().text;
  return vars;
}

std::string Runner::complete_stage(
    const StagePrompt& stage, const std::map<std::string, std::string>& vars,
    const std::map<std::string, std::vector<Image>>& images,
    llm::SectionValues* out_sections) {
  llm::CompletionRequest req;
  req.model = profile_.model;
  req.temperature = profile_.temperature;
  req.max_tokens = profile_.max_tokens;
  req.messages.push_back(llm::Message{llm::Role::user, stage.prompt.render(vars, images)});
  std::string response = provider_.complete(req);
  if (out_sections) *out_sections = llm::parse_sections(response, stage.schema);
  return response;
}

GatheredInfo Runner::stage_gather(const obs::VideoClip& clip) {
  GatheredInfo info;
  const obs::FramePtr& first = clip.frames.front();
  Rect region = profile_.keyframe_region.value_or(first->image.bounds());
  auto keyframes = obs::extract_keyframes(clip, region, profile_.keyframe_threshold);

  for (const auto& kf : keyframes) {
    auto vars = base_vars(0);
    vars.erase("iteration");
    vars["frame_id"] = std::to_string(kf->index);
    llm::SectionValues sections;
    complete_stage(prompts_.gather_text, vars, {{"keyframe", {kf->image}}},
                   &sections);
    info.keyframe_texts.push_back(sections.get_text("Text"));
    info.keyframe_ids.push_back(kf->index);
  }

  const obs::FramePtr& last = clip.frames.back();
  info.last_frame_id = last->index;
  Image shown = last->image;

  if (profile_.augmentation.count("som")) {
    aug::ColorComponentSegmenter segmenter(32, 64);  // glyph-sized specks are noise
    aug::MarkSet marks = aug::segment_to_marks(shown, segmenter);
    info.marks = marks;
    shown = aug::render_marks(shown, marks, aug::MarkStyle::standard);
  }
  if (profile_.augmentation.count("grid")) {
    shown = aug::draw_grid(shown, aug::GridSpec{}).image;
  }
  if (profile_.augmentation.count("bands")) {
    shown = aug::draw_side_bands(shown);
  }
  if (profile_.augmentation.count("pointer")) {
    Point p = executor_->pointer();
    p.x = std::clamp(p.x, 0, shown.width() - 1);
    p.y = std::clamp(p.y, 0, shown.height() - 1);
    shown = aug::draw_pointer(shown, p);
  }

  auto vars = base_vars(0);
  vars.erase("iteration");
  vars["frame_id"] = std::to_string(last->index);
  llm::SectionValues sections;
  complete_stage(prompts_.gather_describe, vars, {{"last_frame", {shown}}},
                 &sections);
  info.last_frame_description = sections.get_text("Description");

  last_marks_ = info.marks;
  return info;
}

ReflectionOutcome Runner::stage_reflect(const obs::VideoClip& clip,
                                        std::int64_t iteration) {
  ReflectionOutcome outcome;
  if (iteration <= 1 || last_action_calls_.empty()) {
    // nothing has been executed yet; bootstrap with a successful default
    return outcome;
  }

  auto sampled = obs::sample_frames(clip, profile_.reflection_frames);
  std::vector<Image> frames;
  frames.reserve(sampled.size());
  for (const auto& f : sampled)
    frames.push_back(obs::downscale_to_width(f->image, profile_.downscale_width));

  auto vars = base_vars(iteration);
  std::vector<std::string> call_strs;
  for (const auto& c : last_action_calls_) call_strs.push_back(skill::to_string(c));
  vars["last_action"] = join(call_strs, "; ");

  llm::SectionValues sections;
  complete_stage(prompts_.reflect, vars, {{"reflection_frames", frames}}, &sections);

  outcome.last_action_ok = sections.get_bool("Success");
  outcome.task_done = sections.get_bool("TaskComplete");
  if (sections.has("Analysis")) outcome.failure_analysis = sections.get_text("Analysis");
  if (sections.bools.count("ContinueAction"))
    outcome.continue_held_action = sections.get_bool("ContinueAction");
  if (!outcome.last_action_ok && outcome.failure_analysis.empty())
    outcome.failure_analysis = "unspecified failure";
  return outcome;
}

TaskSpec Runner::stage_infer_task(const ReflectionOutcome& reflection,
                                  const GatheredInfo& gathered,
                                  std::int64_t iteration) {
  if (reflection.task_done) tasks_.pop_completed();
  tasks_.tick(iteration);

  auto vars = base_vars(iteration);
  vars["reflection"] = reflection.last_action_ok
                           ? "last action succeeded"
                           : "last action failed: " + reflection.failure_analysis;
  std::string gathered_text = join(gathered.keyframe_texts, " | ");
  if (!gathered.last_frame_description.empty()) {
    if (!gathered_text.empty()) gathered_text += " | ";
    gathered_text += gathered.last_frame_description;
  }
  vars["gathered"] = gathered_text.empty() ? "(none)" : gathered_text;

  llm::SectionValues sections;
  complete_stage(prompts_.infer_task, vars, {}, &sections);

  std::string proposal = trim(sections.get_text("Task"));
  if (!proposal.empty() && to_lower(proposal) != "none") {
    Horizon horizon = Horizon::long_horizon;
    if (sections.has("Horizon") && to_lower(sections.get_text("Horizon")) == "short")
      horizon = Horizon::short_horizon;
    tasks_.push(TaskSpec{proposal, horizon, iteration}, iteration);
  }
  if (tasks_.empty())
    tasks_.push(TaskSpec{profile_.initial_task, Horizon::long_horizon, iteration},
                iteration);
  return *tasks_.active();
}

std::pair<std::vector<std::string>, std::vector<std::string>> Runner::stage_curate(
    const TaskSpec& task, const GatheredInfo& gathered, std::int64_t iteration) {
  auto vars = base_vars(iteration);
  vars["task"] = task.description;
  vars["gathered"] = join(gathered.keyframe_texts, " | ");

  llm::SectionValues sections;
  complete_stage(prompts_.curate, vars, {}, &sections);

  std::vector<std::string> new_skills;
  if (sections.has("Skills")) {
    for (const auto& block : sections.get_code("Skills")) {
      try {
        skill::SkillScript script = skill::parse(block);
        auto issues = skill::validate(script, *store_);
        if (!issues.empty()) {
          // invalid generations are reported, never stored
          raise(issues[0].code, issues[0].message);
        }
        std::string name = script.name;
        store_->add_script(std::move(script), provider_,
                           pmem::SkillSource::generated, iteration);
        new_skills.push_back(name);
      } catch (const Error& e) {
        pending_errors_.push_back(std::string("curation rejected skill: ") +
                                  e.what());
      }
    }
  }

  std::vector<std::string> retrieved;
  for (const auto& r : store_->retrieve(task.description, profile_.top_k, provider_))
    retrieved.push_back(r.entry->name());
  return {new_skills, retrieved};
}

PlannedAction Runner::stage_plan(const TaskSpec& task,
                                 const std::vector<std::string>& retrieved,
                                 const GatheredInfo& gathered,
                                 const std::vector<std::string>& new_skills,
                                 std::int64_t iteration) {
  auto vars = base_vars(iteration);
  vars["task"] = task.description;

  std::vector<std::string> skill_lines;
  std::set<std::string> allowed;
  auto add_allowed = [&](const std::string& name) {
    if (!allowed.insert(name).second) return;
    const pmem::SkillEntry* e = store_->find(name);
    if (e) skill_lines.push_back(name + ": " + e->doc);
  };
  for (const auto& n : retrieved) add_allowed(n);
  for (const auto& n : new_skills) add_allowed(n);
  for (const auto& n : store_->names()) {
    const pmem::SkillEntry* e = store_->find(n);
    if (e && e->source == pmem::SkillSource::predefined) add_allowed(n);
  }
  allowed.insert(kInfeasibleSkill);

  vars["retrieved_skills"] = join(skill_lines, "\n");
  vars["gathered"] = gathered.last_frame_description.empty()
                         ? join(gathered.keyframe_texts, " | ")
                         : gathered.last_frame_description;
  std::vector<std::string> digests;
  for (const auto* r : episodic_->recent(profile_.episodic_k))
    digests.push_back(r->digest());
  vars["memory"] = digests.empty() ? "(empty)" : join(digests, "\n");

  llm::SectionValues sections;
  complete_stage(prompts_.plan, vars, {}, &sections);

  PlannedAction action;
  if (sections.has("Reasoning")) action.reasoning = sections.get_text("Reasoning");

  for (const auto& item : sections.get_list("Actions")) {
    skill::SkillCall call = skill::parse_call(item);  // throws MalformedCall
    if (call.name == kInfeasibleSkill) {
      action.infeasible = true;
      action.calls.clear();
      return action;
    }
    if (!allowed.count(call.name))
      raise(errc::unknown_skill_chosen,
            "'" + call.name + "' is neither retrieved nor built-in");
    if (auto issue = skill::check_call(*store_, call))
      raise(issue->code, issue->message);
    action.calls.push_back(std::move(call));
  }

  // games mode executes only the first action; software mode at most two
  std::size_t cap = static_cast<std::size_t>(profile_.actions_per_step);
  if (action.calls.size() > cap) action.calls.resize(cap);
  return action;
}

std::vector<io::ExecReport> Runner::stage_execute(const PlannedAction& action,
                                                  IterationRecord& record) {
  std::vector<io::ExecReport> reports;
  if (action.calls.empty()) return reports;

  unpause_env();
  // an ongoing held action continues only when reflection asked for it
  if (!record.reflection.continue_held_action && !executor_->held().empty())
    executor_->release_all();

  skill::CompileContext ctx;
  ctx.screen = executor_->config().screen;
  ctx.duration_ceiling = executor_->config().duration_ceiling;
  ctx.marks = last_marks_ ? &*last_marks_ : nullptr;

  for (const auto& call : action.calls) {
    std::vector<io::ActionPrimitive> prims;
    try {
      prims = skill::compile(call, *store_, ctx);
    } catch (const Error& e) {
      record.errors.push_back("compile '" + skill::to_string(call) +
                              "': " + e.what());
      continue;  // no primitives executed for this call
    }
    auto rs = executor_->execute_sequence(prims, /*abort_on_error=*/true);
    for (auto& r : rs) {
      // conflicting hold: release all held inputs and log the conflict
      if (!r.ok() && r.error_code == errc::already_held) {
        record.errors.push_back("held-action conflict on " + r.primitive +
                                "; releasing held inputs");
        executor_->release_all();
      }
      reports.push_back(std::move(r));
    }
  }

  pause_env();
  last_action_calls_ = action.calls;
  return reports;
}

std::vector<std::string> Runner::explore_toolbar(const std::vector<Rect>& item_rects) {
  std::vector<std::string> generated;
  aug::ColorComponentSegmenter segmenter(32, 64);
  const Point park{env_->screen_width() - 1, 0};
  const double hover_seconds = 3.0 / profile_.ticks_per_second;

  auto move_to = [&](Point p, double settle_seconds) {
    unpause_env();
    executor_->execute(io::MouseMove{static_cast<double>(p.x),
                                     static_cast<double>(p.y), 0.0,
                                     io::CoordMode::absolute});
    if (settle_seconds > 0) executor_->execute(io::Wait{settle_seconds});
    pause_env();
  };

  auto read_tooltip = [&](Point centroid) -> std::optional<std::pair<std::string, bool>> {
    move_to(centroid, hover_seconds);
    Image frame = env_->render();
    auto vars = base_vars(0);
    vars.erase("iteration");
    vars["position"] = std::to_string(centroid.x) + " " + std::to_string(centroid.y);
    llm::SectionValues sections;
    complete_stage(prompts_.toolbar_tooltip, vars, {{"tooltip_frame", {frame}}},
                   &sections);
    return std::make_pair(sections.get_text("Tooltip"),
                          sections.get_bool("Selectable"));
  };

  auto generate_skill = [&](const std::string& description,
                            Point centroid) -> std::optional<std::string> {
    auto vars = base_vars(0);
    vars.erase("iteration");
    vars["description"] = description;
    vars["position"] =
        "(" + std::to_string(centroid.x) + ", " + std::to_string(centroid.y) + ")";
    vars["slug"] = slugify(description);
    llm::SectionValues sections;
    complete_stage(prompts_.toolbar_skill, vars, {}, &sections);
    auto blocks = sections.get_code("Skill");
    if (blocks.empty()) return std::nullopt;
    try {
      skill::SkillScript script = skill::parse(blocks.front());
      auto issues = skill::validate(script, *store_);
      if (!issues.empty()) raise(issues[0].code, issues[0].message);
      std::string name = script.name;
      store_->add_script(std::move(script), provider_,
                         pmem::SkillSource::generated, 0);
      return name;
    } catch (const Error& e) {
      pending_errors_.push_back(std::string("toolbar skill rejected: ") + e.what());
      return std::nullopt;
    }
  };

  // first-level items: provided rects, or segmentation over the toolbar region
  std::vector<Rect> items = item_rects;
  if (items.empty()) {
    move_to(park, 0);
    aug::MarkSet marks = aug::segment_to_marks(env_->render(), segmenter);
    for (const auto& m : marks.marks) {
      if (!profile_.toolbar_region ||
          profile_.toolbar_region->intersect(m.rect).valid())
        items.push_back(m.rect);
    }
  }

  for (const Rect& item : items) {
    move_to(park, 0);
    aug::MarkSet baseline = aug::segment_to_marks(env_->render(), segmenter);

    auto tooltip = read_tooltip(aug::centroid(item));
    if (!tooltip) continue;
    if (!tooltip->second) continue;  // not selectable yet (locked)

    auto name = generate_skill(tooltip->first, aug::centroid(item));
    if (!name) continue;
    generated.push_back(*name);

    // execute the new skill to open the second-level toolbar
    unpause_env();
    skill::CompileContext ctx;
    ctx.screen = executor_->config().screen;
    try {
      auto prims = skill::compile(skill::SkillCall{*name, {}}, *store_, ctx);
      executor_->execute_sequence(prims, true);
    } catch (const Error& e) {
      pending_errors_.push_back(std::string("toolbar open failed: ") + e.what());
      pause_env();
      continue;
    }
    executor_->execute(io::MouseMove{static_cast<double>(park.x),
                                     static_cast<double>(park.y), 0.0,
                                     io::CoordMode::absolute});
    executor_->execute(io::Wait{1.0 / profile_.ticks_per_second});
    pause_env();

    aug::MarkSet after = aug::segment_to_marks(env_->render(), segmenter);
    std::vector<Rect> second_level;
    for (const auto& m : after.marks) {
      bool existed = false;
      for (const auto& b : baseline.marks)
        if (b.rect == m.rect) existed = true;
      if (!existed && !(m.rect == item)) second_level.push_back(m.rect);
    }

    for (const Rect& sub : second_level) {
      auto sub_tooltip = read_tooltip(aug::centroid(sub));
      if (!sub_tooltip || !sub_tooltip->second) continue;
      auto sub_name = generate_skill(sub_tooltip->first, aug::centroid(sub));
      if (sub_name) generated.push_back(*sub_name);
    }
  }

  move_to(park, 0);
  return generated;
}

RunOutcome Runner::run() {
  RunOutcome outcome;
  pause_env();

  if (profile_.toolbar_exploration)
    outcome.generated_skills = explore_toolbar();

  outcome.preamble_events = recorder_->take_entries();

  bool terminated = false;
  for (int i = 1; i <= profile_.max_steps && !terminated; ++i) {
    if (env_->check_goal()) {
      outcome.success = true;
      outcome.reason = "goal";
      terminated = true;
      break;
    }

    IterationRecord rec;
    rec.iteration = i;
    rec.tick_start = clock_->now();

    try {
      bootstrap_frames();
      obs::VideoClip clip = capture_->clip_since_last_action();
      rec.gathered = stage_gather(clip);
      rec.reflection = stage_reflect(clip, i);
      rec.task = stage_infer_task(rec.reflection, rec.gathered, i);
      auto [new_skills, retrieved] = stage_curate(rec.task, rec.gathered, i);
      rec.new_skills = new_skills;
      rec.retrieved = retrieved;
      rec.action = stage_plan(rec.task, retrieved, rec.gathered, new_skills, i);
      if (!rec.action.infeasible) rec.reports = stage_execute(rec.action, rec);
    } catch (const Error& e) {
      // non-fatal stage failure: the iteration is recorded and the loop
      // retries on the next pass
      rec.errors.push_back(e.what());
      pause_env();
    }
    std::move(pending_errors_.begin(), pending_errors_.end(),
              std::back_inserter(rec.errors));
    pending_errors_.clear();

    emem::EpisodicRecord er;
    er.iteration = i;
    er.screenshot_refs = rec.gathered.keyframe_ids;
    if (rec.gathered.last_frame_id >= 0)
      er.screenshot_refs.push_back(rec.gathered.last_frame_id);
    er.info_text = rec.gathered.last_frame_description;
    er.task = rec.task;
    er.action = rec.action.calls;
    er.reflection = rec.reflection;
    er.reasoning = rec.action.reasoning;
    episodic_->append(std::move(er));

    if (profile_.summary_stride > 0 && i % profile_.summary_stride == 0) {
      try {
        rec.summary_text = episodic_->update_summary(provider_).text;
      } catch (const Error& e) {
        rec.errors.push_back(std::string("summary update failed: ") + e.what());
      }
    }

    rec.render_digest = env_->state_digest();
    rec.tick_end = clock_->now();
    rec.events = recorder_->take_entries();
    outcome.steps_used = i;

    if (rec.action.infeasible) {
      outcome.success = false;
      outcome.reason = "infeasible";
      terminated = true;
    } else if (env_->check_goal()) {
      outcome.success = true;
      outcome.reason = "goal";
      terminated = true;
    }
    outcome.iterations.push_back(std::move(rec));
  }

  if (!terminated) {
    outcome.success = false;
    outcome.reason = "max_steps";
  }

  executor_->release_all();
  outcome.final_events = recorder_->take_entries();
  outcome.final_tick = clock_->now();
  outcome.final_render_digest = env_->state_digest();
  return outcome;
}

}  // namespace cradle::pipeline
