#include "cradle/cli/trajectory.hpp"

#include <fstream>

#include "cradle/core/error.hpp"
#include "cradle/core/hash.hpp"
#include "cradle/core/text.hpp"
#include "cradle/sim/env.hpp"
#include "nlohmann/json.hpp"

namespace cradle::cli {

using nlohmann::json;

namespace {

json events_to_json(const std::vector<io::RecordingBackend::Entry>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    if (e.is_focus) {
      arr.push_back({{"t", e.at}, {"focus", e.focus_value}});
    } else {
      arr.push_back({{"t", e.at}, {"e", io::to_string(e.event)}});
    }
  }
  return arr;
}

std::string gathered_digest(const pipeline::GatheredInfo& g) {
  Sha256 h;
  for (const auto& t : g.keyframe_texts) {
    h.update(t);
    h.update("\x1f");
  }
  h.update(g.last_frame_description);
  return h.hex_digest();
}

const char* outcome_name(io::ExecOutcome o) {
  switch (o) {
    case io::ExecOutcome::ok: return "ok";
    case io::ExecOutcome::error: return "error";
    case io::ExecOutcome::not_run: return "not_run";
  }
  return "?";
}

}  // namespace

void write_trajectory(const std::string& path, const pipeline::Profile& profile,
                      const pipeline::RunOutcome& outcome) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot write trajectory: " + path);

  json header = {{"schema", kTrajectorySchema},
                 {"profile", profile.name},
                 {"scenario", profile.scenario},
                 {"ticks_per_second", profile.ticks_per_second},
                 {"fps", profile.fps},
                 {"mode", pipeline::mode_name(profile.mode)}};
  out << header.dump() << "\n";

  json preamble = {{"preamble", true},
                   {"events", events_to_json(outcome.preamble_events)},
                   {"generated_skills", outcome.generated_skills}};
  out << preamble.dump() << "\n";

  for (const auto& it : outcome.iterations) {
    json reports = json::array();
    for (const auto& r : it.reports) {
      json jr = {{"p", r.primitive},
                 {"s", r.started_at},
                 {"f", r.finished_at},
                 {"o", outcome_name(r.outcome)}};
      if (r.error_code) jr["e"] = errc_name(*r.error_code);
      reports.push_back(jr);
    }
    std::vector<std::string> calls;
    for (const auto& c : it.action.calls) calls.push_back(skill::to_string(c));
    std::vector<std::int64_t> screenshot_refs = it.gathered.keyframe_ids;
    if (it.gathered.last_frame_id >= 0)
      screenshot_refs.push_back(it.gathered.last_frame_id);
    json line = {
        {"iteration", it.iteration},
        {"tick_start", it.tick_start},
        {"tick_end", it.tick_end},
        {"screenshots", screenshot_refs},
        {"info", it.gathered.last_frame_description},
        {"keyframe_texts", it.gathered.keyframe_texts},
        {"task",
         {{"description", it.task.description},
          {"horizon", pipeline::horizon_name(it.task.horizon)}}},
        {"reflection",
         {{"ok", it.reflection.last_action_ok},
          {"done", it.reflection.task_done},
          {"analysis", it.reflection.failure_analysis},
          {"continue", it.reflection.continue_held_action}}},
        {"gathered_digest", gathered_digest(it.gathered)},
        {"action", calls},
        {"infeasible", it.action.infeasible},
        {"new_skills", it.new_skills},
        {"retrieved", it.retrieved},
        {"reports", reports},
        {"events", events_to_json(it.events)},
        {"errors", it.errors},
        {"render_digest", it.render_digest},
        {"summary", it.summary_text},
    };
    out << line.dump() << "\n";
  }

  json footer = {{"final", true},
                 {"success", outcome.success},
                 {"steps", outcome.steps_used},
                 {"reason", outcome.reason},
                 {"events", events_to_json(outcome.final_events)},
                 {"final_tick", outcome.final_tick},
                 {"final_render_digest", outcome.final_render_digest}};
  out << footer.dump() << "\n";
}

ReplayResult replay_trajectory(const std::string& trajectory_path,
                               const std::string& scenario_path) {
  std::ifstream in(trajectory_path);
  if (!in) raise(errc::io_error, "cannot open trajectory: " + trajectory_path);

  std::string line;
  if (!std::getline(in, line))
    raise(errc::trajectory_parse_error, "empty trajectory file");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("schema", "") != kTrajectorySchema)
    raise(errc::trajectory_parse_error, "bad trajectory header");

  int tps = header.value("ticks_per_second", 100);
  SimClock clock(tps);
  sim::SimEnv env = sim::SimEnv::load_scenario(scenario_path);
  env.attach_clock(clock);

  auto apply_events = [&](const json& events) {
    for (const auto& ev : events) {
      Tick at = ev.at("t").get<Tick>();
      if (at > clock.now()) clock.advance(at - clock.now());
      if (ev.contains("focus")) {
        env.set_focus(at, ev.at("focus").get<bool>());
      } else {
        env.submit(at, io::parse_event(ev.at("e").get<std::string>()));
      }
    }
  };

  ReplayResult result;
  bool saw_footer = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      raise(errc::trajectory_parse_error, "bad trajectory line");

    if (j.contains("preamble")) {
      apply_events(j.at("events"));
      continue;
    }
    if (j.contains("final")) {
      saw_footer = true;
      apply_events(j.at("events"));
      Tick final_tick = j.at("final_tick").get<Tick>();
      if (final_tick > clock.now()) clock.advance(final_tick - clock.now());
      std::string expected = j.at("final_render_digest").get<std::string>();
      if (env.state_digest() != expected) {
        result.ok = false;
        result.message = "final render digest mismatch";
        return result;
      }
      continue;
    }
    if (j.contains("iteration")) {
      apply_events(j.at("events"));
      Tick end = j.at("tick_end").get<Tick>();
      if (end > clock.now()) clock.advance(end - clock.now());
      std::string expected = j.at("render_digest").get<std::string>();
      if (env.state_digest() != expected) {
        result.ok = false;
        result.message = "render digest mismatch at iteration " +
                         std::to_string(j.at("iteration").get<int>());
        return result;
      }
      continue;
    }
    raise(errc::trajectory_parse_error, "unrecognized trajectory line");
  }
  if (!saw_footer)
    raise(errc::trajectory_parse_error, "trajectory lacks final record");

  result.ok = true;
  result.message = "replay matches";
  return result;
}

}  // namespace cradle::cli
