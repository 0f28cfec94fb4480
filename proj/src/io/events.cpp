#include "cradle/io/events.hpp"

#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"

namespace cradle::io {

std::string to_string(const Event& e) {
  std::ostringstream ss;
  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, KeyDown>) {
          ss << "kd " << ev.key;
        } else if constexpr (std::is_same_v<T, KeyUp>) {
          ss << "ku " << ev.key;
        } else if constexpr (std::is_same_v<T, ButtonDown>) {
          ss << "bd " << button_name(ev.button);
        } else if constexpr (std::is_same_v<T, ButtonUp>) {
          ss << "bu " << button_name(ev.button);
        } else if constexpr (std::is_same_v<T, PointerTo>) {
          ss << "pt " << ev.x << " " << ev.y;
        } else {
          static_assert(std::is_same_v<T, ScrollBy>);
          ss << "sc " << ev.distance;
        }
      },
      e);
  return ss.str();
}

Event parse_event(const std::string& line) {
  auto parts = split(trim(line), ' ');
  if (parts.empty()) raise(errc::trajectory_parse_error, "empty event");
  const std::string& tag = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n)
      raise(errc::trajectory_parse_error, "bad event: " + line);
  };
  if (tag == "kd") {
    need(2);
    return KeyDown{parts[1]};
  }
  if (tag == "ku") {
    need(2);
    return KeyUp{parts[1]};
  }
  if (tag == "bd" || tag == "bu") {
    need(2);
    auto b = parse_button(parts[1]);
    if (!b) raise(errc::trajectory_parse_error, "bad button: " + line);
    if (tag == "bd") return ButtonDown{*b};
    return ButtonUp{*b};
  }
  if (tag == "pt") {
    need(3);
    return PointerTo{std::stoi(parts[1]), std::stoi(parts[2])};
  }
  if (tag == "sc") {
    need(2);
    return ScrollBy{std::stoi(parts[1])};
  }
  raise(errc::trajectory_parse_error, "unknown event tag: " + tag);
}

}  // namespace cradle::io
