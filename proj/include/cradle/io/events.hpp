#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cradle/core/clock.hpp"
#include "cradle/io/primitives.hpp"

namespace cradle::io {

struct KeyDown {
  std::string key;
  bool operator==(const KeyDown&) const = default;
};
struct KeyUp {
  std::string key;
  bool operator==(const KeyUp&) const = default;
};
struct ButtonDown {
  Button button;
  bool operator==(const ButtonDown&) const = default;
};
struct ButtonUp {
  Button button;
  bool operator==(const ButtonUp&) const = default;
};
struct PointerTo {
  int x = 0;
  int y = 0;
  bool operator==(const PointerTo&) const = default;
};
struct ScrollBy {
  int distance = 0;
  bool operator==(const ScrollBy&) const = default;
};

using Event = std::variant<KeyDown, KeyUp, ButtonDown, ButtonUp, PointerTo, ScrollBy>;

std::string to_string(const Event& e);
Event parse_event(const std::string& line);  // inverse of to_string

/// Output sink for low-level input events. A simulated environment consumes
/// them directly; a real-OS backend would map them to input injection.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual void submit(Tick at, const Event& event) = 0;
  virtual void set_focus(Tick at, bool focused) = 0;
};

struct LoggedEvent {
  Tick at;
  Event event;
};

/// Backend that only records. Used pervasively in tests.
class LogBackend : public Backend {
 public:
  void submit(Tick at, const Event& event) override {
    log_.push_back({at, event});
  }
  void set_focus(Tick, bool focused) override { focused_ = focused; }

  const std::vector<LoggedEvent>& log() const { return log_; }
  void clear() { log_.clear(); }
  bool focused() const { return focused_; }

 private:
  std::vector<LoggedEvent> log_;
  bool focused_ = true;
};

/// Forwards to an inner backend while keeping a copy of everything that went
/// through, including focus flips (needed for trajectory replay).
class RecordingBackend : public Backend {
 public:
  struct Entry {
    Tick at = 0;
    bool is_focus = false;
    bool focus_value = false;
    Event event;
  };

  explicit RecordingBackend(Backend& inner) : inner_(inner) {}

  void submit(Tick at, const Event& event) override {
    entries_.push_back(Entry{at, false, false, event});
    inner_.submit(at, event);
  }
  void set_focus(Tick at, bool focused) override {
    entries_.push_back(Entry{at, true, focused, PointerTo{}});
    inner_.set_focus(at, focused);
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry> take_entries() { return std::exchange(entries_, {}); }

 private:
  Backend& inner_;
  std::vector<Entry> entries_;
};

}  // namespace cradle::io
