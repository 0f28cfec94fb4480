#include "cradle/pipeline/task.hpp"

namespace cradle::pipeline {

const char* horizon_name(Horizon h) {
  return h == Horizon::long_horizon ? "long" : "short";
}

void TaskStack::push(TaskSpec task, std::int64_t iteration) {
  task.created_iter = iteration;
  if (task.horizon == Horizon::short_horizon) {
    // at most one short task active
    if (!stack_.empty() && stack_.back().horizon == Horizon::short_horizon)
      stack_.pop_back();
    stack_.push_back(std::move(task));
    short_active_since_ = iteration;
    short_iterations_ = 0;
    return;
  }
  // a long task supersedes an active short task
  if (!stack_.empty() && stack_.back().horizon == Horizon::short_horizon)
    stack_.pop_back();
  stack_.push_back(std::move(task));
  short_active_since_ = -1;
  short_iterations_ = 0;
}

void TaskStack::pop_completed() {
  if (stack_.empty()) return;
  stack_.pop_back();
  short_active_since_ = -1;
  short_iterations_ = 0;
}

bool TaskStack::tick(std::int64_t /*iteration*/) {
  if (stack_.empty() || stack_.back().horizon != Horizon::short_horizon)
    return false;
  ++short_iterations_;
  if (short_iterations_ >= window_) {
    // window exhausted: return to the last long-horizon task in the stack
    stack_.pop_back();
    short_active_since_ = -1;
    short_iterations_ = 0;
    return true;
  }
  return false;
}

}  // namespace cradle::pipeline
