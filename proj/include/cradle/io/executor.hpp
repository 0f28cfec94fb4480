#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cradle/core/clock.hpp"
#include "cradle/core/image.hpp"
#include "cradle/io/events.hpp"
#include "cradle/io/primitives.hpp"

namespace cradle::io {

struct HeldState {
  std::set<std::string> keys;
  std::set<Button> buttons;

  bool empty() const { return keys.empty() && buttons.empty(); }
};

enum class ExecOutcome { ok, error, not_run };

struct ExecReport {
  std::string primitive;  // textual echo of what ran
  Tick started_at = 0;
  Tick finished_at = 0;
  ExecOutcome outcome = ExecOutcome::ok;
  std::optional<errc> error_code;
  std::string error_message;

  bool ok() const { return outcome == ExecOutcome::ok; }
};

struct KeyTogglePause {
  std::string key = "esc";
};
struct FocusSwitchPause {};
struct NoPause {};
using PauseStrategy = std::variant<KeyTogglePause, FocusSwitchPause, NoPause>;

PauseStrategy parse_pause_strategy(const std::string& text);
std::string to_string(const PauseStrategy& s);

/// Maps a primitive's coordinates to an integral pixel. Relative coordinates
/// map by floor(x * w); 1.0 is the inclusive far edge and clamps to the last
/// pixel. Absolute inputs pass through after a bounds check.
Point resolve_coordinates(double x, double y, CoordMode mode,
                          const ScreenGeometry& screen);

/// Single-threaded primitive executor. Owns the held-key/button state and
/// translates primitives into timed backend events on the shared clock.
/// Sync primitives block by advancing the clock; async ones submit their
/// release events with projected ticks and return immediately.
class Executor {
 public:
  Executor(Backend& backend, SimClock& clock, IoConfig config = {});

  ExecReport execute(const ActionPrimitive& p);
  std::vector<ExecReport> execute_sequence(const std::vector<ActionPrimitive>& ps,
                                           bool abort_on_error);

  ExecReport pause(const PauseStrategy& strategy);
  ExecReport unpause(const PauseStrategy& strategy);
  ExecReport release_all();

  const HeldState& held() const { return held_; }
  const IoConfig& config() const { return config_; }
  SimClock& clock() { return clock_; }
  Point pointer() const { return pointer_; }

 private:
  ExecReport run_validated(const ActionPrimitive& p);
  void emit(Tick at, const Event& e);
  ExecReport error_report(const ActionPrimitive& p, errc code,
                          const std::string& message) const;
  ExecReport toggle_key_report(const std::string& key);

  Backend& backend_;
  SimClock& clock_;
  IoConfig config_;
  HeldState held_;
  Point pointer_{0, 0};
};

}  // namespace cradle::io
