#include "cradle/io/executor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cradle/core/text.hpp"

namespace cradle::io {
namespace {

struct TypedChar {
  std::string key;
  bool shifted = false;
};

std::optional<TypedChar> char_to_key(char c) {
  if (c >= 'a' && c <= 'z') return TypedChar{std::string(1, c), false};
  if (c >= 'A' && c <= 'Z')
    return TypedChar{std::string(1, static_cast<char>(c - 'A' + 'a')), true};
  if (c >= '0' && c <= '9') return TypedChar{std::string(1, c), false};
  if (c == ' ') return TypedChar{"space", false};
  if (c == '\n') return TypedChar{"enter", false};
  if (c == '\t') return TypedChar{"tab", false};
  if (c >= 0x21 && c <= 0x7e) return TypedChar{std::string(1, c), false};
  return std::nullopt;
}

}  // namespace

PauseStrategy parse_pause_strategy(const std::string& text) {
  std::string t = trim(text);
  if (t == "none" || t.empty()) return NoPause{};
  if (t == "focus-switch") return FocusSwitchPause{};
  if (starts_with(t, "key-toggle:")) {
    std::string key = t.substr(std::string("key-toggle:").size());
    if (!is_canonical_key(key)) raise(errc::unknown_key, "pause key '" + key + "'");
    return KeyTogglePause{key};
  }
  raise(errc::config_error, "unknown pause strategy '" + t + "'");
}

std::string to_string(const PauseStrategy& s) {
  if (std::holds_alternative<NoPause>(s)) return "none";
  if (std::holds_alternative<FocusSwitchPause>(s)) return "focus-switch";
  return "key-toggle:" + std::get<KeyTogglePause>(s).key;
}

Point resolve_coordinates(double x, double y, CoordMode mode,
                          const ScreenGeometry& screen) {
  if (mode == CoordMode::relative) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
      raise(errc::coordinate_out_of_bounds, "relative coordinates outside [0,1]^2");
    int px = static_cast<int>(std::floor(x * screen.width));
    int py = static_cast<int>(std::floor(y * screen.height));
    // 1.0 is the inclusive far edge
    px = std::min(px, screen.width - 1);
    py = std::min(py, screen.height - 1);
    return Point{px, py};
  }
  int px = static_cast<int>(std::llround(x));
  int py = static_cast<int>(std::llround(y));
  if (px < 0 || px >= screen.width || py < 0 || py >= screen.height)
    raise(errc::coordinate_out_of_bounds, "absolute coordinates outside screen");
  return Point{px, py};
}

Executor::Executor(Backend& backend, SimClock& clock, IoConfig config)
    : backend_(backend), clock_(clock), config_(config) {}

void Executor::emit(Tick at, const Event& e) { backend_.submit(at, e); }

ExecReport Executor::error_report(const ActionPrimitive& p, errc code,
                                  const std::string& message) const {
  ExecReport r;
  r.primitive = to_string(p);
  r.started_at = clock_.now();
  r.finished_at = clock_.now();
  r.outcome = ExecOutcome::error;
  r.error_code = code;
  r.error_message = message;
  return r;
}

ExecReport Executor::execute(const ActionPrimitive& p) {
  if (auto issue = validate_primitive(p, config_))
    return error_report(p, issue->code, issue->message);
  try {
    return run_validated(p);
  } catch (const Error& e) {
    return error_report(p, e.code(), e.what());
  } catch (const std::exception& e) {
    return error_report(p, errc::backend_failure, e.what());
  }
}

ExecReport Executor::run_validated(const ActionPrimitive& p) {
  ExecReport report;
  report.primitive = to_string(p);
  report.started_at = clock_.now();
  report.finished_at = clock_.now();

  auto finish = [&]() {
    report.finished_at = clock_.now();
    return report;
  };
  auto fail = [&](errc code, const std::string& msg) {
    report.outcome = ExecOutcome::error;
    report.error_code = code;
    report.error_message = msg;
    report.finished_at = clock_.now();
    return report;
  };

  if (const auto* kp = std::get_if<KeyPress>(&p)) {
    if (held_.keys.count(kp->key))
      return fail(errc::already_held, "key '" + kp->key + "' already held");
    held_.keys.insert(kp->key);
    emit(clock_.now(), KeyDown{kp->key});
    clock_.sleep_seconds(kp->duration);
    emit(clock_.now(), KeyUp{kp->key});
    held_.keys.erase(kp->key);
    return finish();
  }
  if (const auto* kh = std::get_if<KeyHold>(&p)) {
    if (held_.keys.count(kh->key))
      return fail(errc::already_held, "key '" + kh->key + "' already held");
    emit(clock_.now(), KeyDown{kh->key});
    held_.keys.insert(kh->key);
    return finish();
  }
  if (const auto* kr = std::get_if<KeyRelease>(&p)) {
    if (!held_.keys.count(kr->key))
      return fail(errc::release_not_held, "key '" + kr->key + "' is not held");
    emit(clock_.now(), KeyUp{kr->key});
    held_.keys.erase(kr->key);
    return finish();
  }
  if (const auto* combo = std::get_if<KeyCombo>(&p)) {
    for (const auto& k : combo->keys)
      if (held_.keys.count(k))
        return fail(errc::already_held, "key '" + k + "' already held");
    Tick start = clock_.now();
    Tick dur = clock_.seconds_to_ticks(combo->duration);
    for (const auto& k : combo->keys) emit(start, KeyDown{k});
    if (combo->wait == WaitMode::sync) {
      for (const auto& k : combo->keys) held_.keys.insert(k);
      clock_.sleep_for(dur);
      for (auto it = combo->keys.rbegin(); it != combo->keys.rend(); ++it) {
        emit(clock_.now(), KeyUp{*it});
        held_.keys.erase(*it);
      }
    } else {
      // scheduled completion: release events carry projected ticks
      for (auto it = combo->keys.rbegin(); it != combo->keys.rend(); ++it)
        emit(start + dur, KeyUp{*it});
      report.finished_at = start + dur;
      return report;
    }
    return finish();
  }
  if (const auto* hot = std::get_if<Hotkey>(&p)) {
    for (const auto& k : hot->keys)
      if (held_.keys.count(k))
        return fail(errc::already_held, "key '" + k + "' already held");
    Tick start = clock_.now();
    Tick dur = clock_.seconds_to_ticks(hot->duration);
    Tick n = static_cast<Tick>(hot->keys.size());
    // cumulative targets keep total elapsed equal to the requested duration
    auto key_end = [&](Tick i) { return start + (dur * (i + 1)) / n; };
    if (hot->wait == WaitMode::sync) {
      for (Tick i = 0; i < n; ++i) {
        const auto& k = hot->keys[static_cast<std::size_t>(i)];
        held_.keys.insert(k);
        emit(clock_.now(), KeyDown{k});
        clock_.sleep_for(key_end(i) - clock_.now());
        emit(clock_.now(), KeyUp{k});
        held_.keys.erase(k);
      }
    } else {
      Tick at = start;
      for (Tick i = 0; i < n; ++i) {
        const auto& k = hot->keys[static_cast<std::size_t>(i)];
        emit(at, KeyDown{k});
        emit(key_end(i), KeyUp{k});
        at = key_end(i);
      }
      report.finished_at = at;
      return report;
    }
    return finish();
  }
  if (const auto* tt = std::get_if<TypeText>(&p)) {
    Tick start = clock_.now();
    Tick dur = clock_.seconds_to_ticks(tt->duration);
    Tick n = static_cast<Tick>(tt->text.size());
    for (Tick i = 0; i < n; ++i) {
      auto tc = char_to_key(tt->text[static_cast<std::size_t>(i)]);
      if (!tc) return fail(errc::unknown_key, "untypeable character");
      if (tc->shifted) emit(clock_.now(), KeyDown{"shift"});
      emit(clock_.now(), KeyDown{tc->key});
      clock_.sleep_for(start + (dur * (i + 1)) / n - clock_.now());
      emit(clock_.now(), KeyUp{tc->key});
      if (tc->shifted) emit(clock_.now(), KeyUp{"shift"});
    }
    return finish();
  }
  if (const auto* bc = std::get_if<ButtonClick>(&p)) {
    if (held_.buttons.count(bc->button))
      return fail(errc::already_held, "button already held");
    held_.buttons.insert(bc->button);
    emit(clock_.now(), ButtonDown{bc->button});
    clock_.sleep_seconds(bc->duration);
    emit(clock_.now(), ButtonUp{bc->button});
    held_.buttons.erase(bc->button);
    return finish();
  }
  if (const auto* bh = std::get_if<ButtonHold>(&p)) {
    if (held_.buttons.count(bh->button))
      return fail(errc::already_held, "button already held");
    emit(clock_.now(), ButtonDown{bh->button});
    held_.buttons.insert(bh->button);
    return finish();
  }
  if (const auto* br = std::get_if<ButtonRelease>(&p)) {
    if (!held_.buttons.count(br->button))
      return fail(errc::release_not_held, "button is not held");
    emit(clock_.now(), ButtonUp{br->button});
    held_.buttons.erase(br->button);
    return finish();
  }
  if (const auto* mm = std::get_if<MouseMove>(&p)) {
    Point target = resolve_coordinates(mm->x, mm->y, mm->coords, config_.screen);
    Tick steps = clock_.seconds_to_ticks(mm->speed);
    if (steps <= 0) {
      emit(clock_.now(), PointerTo{target.x, target.y});
    } else {
      Point origin = pointer_;
      for (Tick i = 1; i <= steps; ++i) {
        clock_.sleep_for(1);
        double t = static_cast<double>(i) / static_cast<double>(steps);
        int px = origin.x + static_cast<int>(std::llround((target.x - origin.x) * t));
        int py = origin.y + static_cast<int>(std::llround((target.y - origin.y) * t));
        emit(clock_.now(), PointerTo{px, py});
      }
    }
    pointer_ = target;
    return finish();
  }
  if (const auto* md = std::get_if<MouseDrag>(&p)) {
    Point target =
        resolve_coordinates(md->x, md->y, CoordMode::absolute, config_.screen);
    if (held_.buttons.count(Button::left))
      return fail(errc::already_held, "left button already held");
    emit(clock_.now(), ButtonDown{Button::left});
    emit(clock_.now(), PointerTo{target.x, target.y});
    emit(clock_.now(), ButtonUp{Button::left});
    pointer_ = target;
    return finish();
  }
  if (const auto* sc = std::get_if<Scroll>(&p)) {
    emit(clock_.now(), ScrollBy{sc->distance});
    clock_.sleep_seconds(sc->duration);
    return finish();
  }
  const auto& w = std::get<Wait>(p);
  clock_.sleep_seconds(w.duration);
  return finish();
}

std::vector<ExecReport> Executor::execute_sequence(
    const std::vector<ActionPrimitive>& ps, bool abort_on_error) {
  std::vector<ExecReport> reports;
  reports.reserve(ps.size());
  bool aborted = false;
  for (const auto& p : ps) {
    if (aborted) {
      ExecReport r;
      r.primitive = to_string(p);
      r.started_at = clock_.now();
      r.finished_at = clock_.now();
      r.outcome = ExecOutcome::not_run;
      reports.push_back(std::move(r));
      continue;
    }
    reports.push_back(execute(p));
    if (abort_on_error && !reports.back().ok()) aborted = true;
  }
  return reports;
}

ExecReport Executor::toggle_key_report(const std::string& key) {
  ExecReport report;
  report.primitive = "pause_toggle(" + key + ")";
  report.started_at = clock_.now();
  emit(clock_.now(), KeyDown{key});
  emit(clock_.now(), KeyUp{key});
  report.finished_at = clock_.now();
  return report;
}

ExecReport Executor::pause(const PauseStrategy& strategy) {
  try {
    if (const auto* kt = std::get_if<KeyTogglePause>(&strategy))
      return toggle_key_report(kt->key);
    ExecReport report;
    report.primitive = "pause(" + to_string(strategy) + ")";
    report.started_at = clock_.now();
    if (std::holds_alternative<FocusSwitchPause>(strategy))
      backend_.set_focus(clock_.now(), false);
    report.finished_at = clock_.now();
    return report;
  } catch (const std::exception& e) {
    return error_report(Wait{0}, errc::backend_failure, e.what());
  }
}

ExecReport Executor::unpause(const PauseStrategy& strategy) {
  try {
    if (const auto* kt = std::get_if<KeyTogglePause>(&strategy))
      return toggle_key_report(kt->key);
    ExecReport report;
    report.primitive = "unpause(" + to_string(strategy) + ")";
    report.started_at = clock_.now();
    if (std::holds_alternative<FocusSwitchPause>(strategy))
      backend_.set_focus(clock_.now(), true);
    report.finished_at = clock_.now();
    return report;
  } catch (const std::exception& e) {
    return error_report(Wait{0}, errc::backend_failure, e.what());
  }
}

ExecReport Executor::release_all() {
  ExecReport report;
  report.primitive = "release_all()";
  report.started_at = clock_.now();
  try {
    for (const auto& k : held_.keys) emit(clock_.now(), KeyUp{k});
    for (const auto& b : held_.buttons) emit(clock_.now(), ButtonUp{b});
    held_.keys.clear();
    held_.buttons.clear();
  } catch (const std::exception& e) {
    report.outcome = ExecOutcome::error;
    report.error_code = errc::backend_failure;
    report.error_message = e.what();
  }
  report.finished_at = clock_.now();
  return report;
}

}  // namespace cradle::io
