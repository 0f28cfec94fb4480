#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cradle::pipeline {

enum class Horizon { long_horizon, short_horizon };

const char* horizon_name(Horizon h);

struct TaskSpec {
  std::string description;
  Horizon horizon = Horizon::long_horizon;
  std::int64_t created_iter = 0;

  bool operator==(const TaskSpec&) const = default;
};

/// Outcome of the self-reflection stage for one iteration.
struct ReflectionOutcome {
  bool last_action_ok = true;
  bool task_done = false;
  std::string failure_analysis;  // non-empty whenever last_action_ok is false
  bool continue_held_action = false;
};

/// Task stack with the short-horizon preemption rule: a short task runs for
/// at most `window` iterations, then control returns to the last
/// long-horizon task on the stack.
class TaskStack {
 public:
  explicit TaskStack(int short_task_window = 3) : window_(short_task_window) {}

  bool empty() const { return stack_.empty(); }
  const TaskSpec* active() const { return stack_.empty() ? nullptr : &stack_.back(); }

  /// Pushes a newly inferred task. A short task replaces any currently
  /// active short task instead of stacking on top of it.
  void push(TaskSpec task, std::int64_t iteration);

  /// Pops the active task (reflection saw it completed).
  void pop_completed();

  /// Advances per-iteration bookkeeping: after the active short task has
  /// been active for `window` iterations it is popped, resuming the last
  /// long-horizon task. Returns true when a pop happened.
  bool tick(std::int64_t iteration);

  int window() const { return window_; }
  std::size_t depth() const { return stack_.size(); }

 private:
  int window_;
  std::vector<TaskSpec> stack_;
  std::int64_t short_active_since_ = -1;
  int short_iterations_ = 0;
};

}  // namespace cradle::pipeline
