#include "cradle/io/primitives.hpp"

#include <set>
#include <sstream>

namespace cradle::io {
namespace {

const std::set<std::string>& key_vocabulary() {
  static const std::set<std::string> vocab = [] {
    std::set<std::string> v;
    for (char c = 'a'; c <= 'z'; ++c) v.insert(std::string(1, c));
    for (char c = '0'; c <= '9'; ++c) v.insert(std::string(1, c));
    for (int i = 1; i <= 12; ++i) v.insert("f" + std::to_string(i));
    for (const char* k : {"esc", "enter", "space", "tab", "shift", "ctrl",
                          "alt", "up", "down", "left", "right"})
      v.insert(k);
    return v;
  }();
  return vocab;
}

std::optional<ValidationIssue> check_duration(double d, const IoConfig& cfg) {
  if (d < 0.0 || d > cfg.duration_ceiling) {
    return ValidationIssue{errc::duration_out_of_range,
                           "duration " + std::to_string(d) + " outside [0, " +
                               std::to_string(cfg.duration_ceiling) + "]"};
  }
  return std::nullopt;
}

std::optional<ValidationIssue> check_key(const std::string& key) {
  if (!is_canonical_key(key)) {
    return ValidationIssue{errc::unknown_key, "unknown key name '" + key + "'"};
  }
  return std::nullopt;
}

std::optional<ValidationIssue> check_key_list(const std::vector<std::string>& keys) {
  if (keys.empty())
    return ValidationIssue{errc::unknown_key, "empty key list"};
  std::set<std::string> seen;
  for (const auto& k : keys) {
    if (auto issue = check_key(k)) return issue;
    if (!seen.insert(k).second)
      return ValidationIssue{errc::unknown_key, "duplicate key '" + k + "' in list"};
  }
  return std::nullopt;
}

std::optional<ValidationIssue> check_coords(double x, double y, CoordMode mode,
                                            const ScreenGeometry& screen) {
  if (mode == CoordMode::relative) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
      return ValidationIssue{errc::coordinate_out_of_bounds,
                             "relative coordinates must lie in [0,1]^2"};
    }
  } else {
    if (x < 0 || x >= screen.width || y < 0 || y >= screen.height) {
      return ValidationIssue{errc::coordinate_out_of_bounds,
                             "absolute coordinates outside screen"};
    }
  }
  return std::nullopt;
}

std::string join_keys(const std::vector<std::string>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += "+";
    out += keys[i];
  }
  return out;
}

}  // namespace

const char* button_name(Button b) {
  switch (b) {
    case Button::left: return "left";
    case Button::middle: return "middle";
    case Button::right: return "right";
  }
  return "?";
}

std::optional<Button> parse_button(const std::string& name) {
  if (name == "left") return Button::left;
  if (name == "middle") return Button::middle;
  if (name == "right") return Button::right;
  return std::nullopt;
}

bool is_canonical_key(const std::string& name) {
  return key_vocabulary().count(name) > 0;
}

std::optional<ValidationIssue> validate_primitive(const ActionPrimitive& p,
                                                  const IoConfig& config) {
  using R = std::optional<ValidationIssue>;
  return std::visit(
      [&](const auto& prim) -> R {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, KeyPress>) {
          if (auto i = check_key(prim.key)) return i;
          return check_duration(prim.duration, config);
        } else if constexpr (std::is_same_v<T, KeyHold> ||
                             std::is_same_v<T, KeyRelease>) {
          return check_key(prim.key);
        } else if constexpr (std::is_same_v<T, KeyCombo> ||
                             std::is_same_v<T, Hotkey>) {
          if (auto i = check_key_list(prim.keys)) return i;
          return check_duration(prim.duration, config);
        } else if constexpr (std::is_same_v<T, TypeText>) {
          if (prim.text.empty())
            return ValidationIssue{errc::unknown_key, "empty text"};
          for (char c : prim.text) {
            if (c != '\n' && c != '\t' && (c < 0x20 || c > 0x7e))
              return ValidationIssue{errc::unknown_key,
                                     "unprintable character in text"};
          }
          return check_duration(prim.duration, config);
        } else if constexpr (std::is_same_v<T, ButtonClick>) {
          return check_duration(prim.duration, config);
        } else if constexpr (std::is_same_v<T, ButtonHold> ||
                             std::is_same_v<T, ButtonRelease>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, MouseMove>) {
          if (auto i = check_coords(prim.x, prim.y, prim.coords, config.screen))
            return i;
          return check_duration(prim.speed, config);
        } else if constexpr (std::is_same_v<T, MouseDrag>) {
          return check_coords(prim.x, prim.y, CoordMode::absolute, config.screen);
        } else if constexpr (std::is_same_v<T, Scroll>) {
          return check_duration(prim.duration, config);
        } else {
          static_assert(std::is_same_v<T, Wait>);
          return check_duration(prim.duration, config);
        }
      },
      p);
}

std::string to_string(const ActionPrimitive& p) {
  std::ostringstream ss;
  std::visit(
      [&](const auto& prim) {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, KeyPress>) {
          ss << "key_press(" << prim.key << ", " << prim.duration << ")";
        } else if constexpr (std::is_same_v<T, KeyHold>) {
          ss << "key_hold(" << prim.key << ")";
        } else if constexpr (std::is_same_v<T, KeyRelease>) {
          ss << "key_release(" << prim.key << ")";
        } else if constexpr (std::is_same_v<T, KeyCombo>) {
          ss << "key_combo(" << join_keys(prim.keys) << ", " << prim.duration
             << (prim.wait == WaitMode::async ? ", async" : ", sync") << ")";
        } else if constexpr (std::is_same_v<T, Hotkey>) {
          ss << "hotkey(" << join_keys(prim.keys) << ", " << prim.duration
             << (prim.wait == WaitMode::async ? ", async" : ", sync") << ")";
        } else if constexpr (std::is_same_v<T, TypeText>) {
          ss << "type_text(\"" << prim.text << "\", " << prim.duration << ")";
        } else if constexpr (std::is_same_v<T, ButtonClick>) {
          ss << "button_click(" << button_name(prim.button) << ", "
             << prim.duration << ")";
        } else if constexpr (std::is_same_v<T, ButtonHold>) {
          ss << "button_hold(" << button_name(prim.button) << ")";
        } else if constexpr (std::is_same_v<T, ButtonRelease>) {
          ss << "button_release(" << button_name(prim.button) << ")";
        } else if constexpr (std::is_same_v<T, MouseMove>) {
          ss << "mouse_move(" << prim.x << ", " << prim.y << ", " << prim.speed
             << ", "
             << (prim.coords == CoordMode::relative ? "relative" : "absolute")
             << ")";
        } else if constexpr (std::is_same_v<T, MouseDrag>) {
          ss << "mouse_drag(" << prim.x << ", " << prim.y << ")";
        } else if constexpr (std::is_same_v<T, Scroll>) {
          ss << "scroll(" << prim.distance << ", " << prim.duration << ")";
        } else {
          static_assert(std::is_same_v<T, Wait>);
          ss << "wait(" << prim.duration << ")";
        }
      },
      p);
  return ss.str();
}

}  // namespace cradle::io
