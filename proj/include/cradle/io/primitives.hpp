#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cradle/core/error.hpp"

namespace cradle::io {

enum class Button { left, middle, right };
enum class WaitMode { sync, async };
enum class CoordMode { absolute, relative };
// Only identity is executed; other names are accepted on the wire and
// degrade to identity.
enum class TweenMode { identity };

const char* button_name(Button b);
std::optional<Button> parse_button(const std::string& name);

/// Canonical key vocabulary: a-z, 0-9, esc, enter, space, tab, shift, ctrl,
/// alt, arrows, f1-f12. Anything else is rejected when scripts are parsed.
bool is_canonical_key(const std::string& name);

struct KeyPress {
  std::string key;
  double duration = 0.0;
};
struct KeyHold {
  std::string key;
};
struct KeyRelease {
  std::string key;
};
struct KeyCombo {
  std::vector<std::string> keys;  // held together, released in reverse order
  double duration = 0.0;
  WaitMode wait = WaitMode::sync;
};
struct Hotkey {
  std::vector<std::string> keys;  // pressed as a fast sequence, in order
  double duration = 0.0;
  WaitMode wait = WaitMode::sync;
};
struct TypeText {
  std::string text;
  double duration = 0.0;
};
struct ButtonClick {
  Button button = Button::left;
  double duration = 0.0;
};
struct ButtonHold {
  Button button = Button::left;
};
struct ButtonRelease {
  Button button = Button::left;
};
struct MouseMove {
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;  // total travel time in seconds
  CoordMode coords = CoordMode::absolute;
  TweenMode tween = TweenMode::identity;
};
struct MouseDrag {
  double x = 0.0;
  double y = 0.0;
};
struct Scroll {
  int distance = 0;  // pixels, sign is direction
  double duration = 0.0;
};
struct Wait {
  double duration = 0.0;
};

using ActionPrimitive =
    std::variant<KeyPress, KeyHold, KeyRelease, KeyCombo, Hotkey, TypeText,
                 ButtonClick, ButtonHold, ButtonRelease, MouseMove, MouseDrag,
                 Scroll, Wait>;

struct ScreenGeometry {
  int width = 1920;
  int height = 1080;
};

struct IoConfig {
  double duration_ceiling = 30.0;  // seconds
  ScreenGeometry screen;
};

struct ValidationIssue {
  errc code;
  std::string message;
};

/// Structural validation against the type invariants; does not consult
/// held-key state (the executor does that part).
std::optional<ValidationIssue> validate_primitive(const ActionPrimitive& p,
                                                  const IoConfig& config);

std::string to_string(const ActionPrimitive& p);

}  // namespace cradle::io
