#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace cradle {

using Tick = std::int64_t;

/// Deterministic simulated clock. All timing in the runtime is expressed in
/// ticks of this clock; wall time never enters the control path. Observers
/// (frame capture, the simulated environment) are notified on every advance
/// in registration order, which keeps runs reproducible.
class SimClock {
 public:
  using Observer = std::function<void(Tick from, Tick to)>;

  explicit SimClock(int ticks_per_second = 100)
      : ticks_per_second_(ticks_per_second) {}

  Tick now() const { return now_; }
  int ticks_per_second() const { return ticks_per_second_; }

  Tick seconds_to_ticks(double seconds) const {
    return static_cast<Tick>(std::llround(seconds * ticks_per_second_));
  }
  double ticks_to_seconds(Tick t) const {
    return static_cast<double>(t) / ticks_per_second_;
  }

  void advance(Tick delta) {
    if (delta <= 0) return;
    Tick from = now_;
    now_ += delta;
    for (auto& entry : observers_) {
      if (entry.fn) entry.fn(from, now_);
    }
  }

  void sleep_for(Tick delta) { advance(delta); }
  void sleep_seconds(double seconds) { advance(seconds_to_ticks(seconds)); }

  int add_observer(Observer fn) {
    int id = next_id_++;
    observers_.push_back({id, std::move(fn)});
    return id;
  }

  void remove_observer(int id) {
    for (auto& entry : observers_) {
      if (entry.id == id) entry.fn = nullptr;
    }
  }

 private:
  struct Entry {
    int id;
    Observer fn;
  };

  int ticks_per_second_;
  Tick now_ = 0;
  int next_id_ = 1;
  std::vector<Entry> observers_;
};

}  // namespace cradle
