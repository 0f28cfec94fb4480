#include "cradle/obs/capture.hpp"

#include <cmath>

#include "cradle/core/error.hpp"

namespace cradle::obs {

Capture::Capture(FrameSource& source, SimClock& clock, CaptureConfig config)
    : source_(source), clock_(clock), config_(config) {
  if (!(config_.fps > 0.0) || config_.fps > 60.0)
    raise(errc::config_error, "fps must lie in (0, 60]");
  if (config_.ring_capacity == 0)
    raise(errc::config_error, "ring capacity must be positive");
  ticks_per_frame_ = std::max<Tick>(
      1, static_cast<Tick>(std::llround(clock.ticks_per_second() / config_.fps)));
  next_capture_ = clock.now() + ticks_per_frame_;
  action_marker_ = clock.now();
  observer_id_ = clock.add_observer(
      [this](Tick from, Tick to) { on_advance(from, to); });
}

Capture::~Capture() { stop(); }

void Capture::stop() {
  if (observer_id_ >= 0) {
    clock_.remove_observer(observer_id_);
    observer_id_ = -1;
  }
}

void Capture::on_advance(Tick /*from*/, Tick to) {
  while (next_capture_ <= to) {
    Image shot = source_.render_surface();
    std::lock_guard<std::mutex> lock(mutex_);
    push_locked(std::move(shot), next_capture_);
    next_capture_ += ticks_per_frame_;
  }
}

void Capture::push_locked(Image image, Tick at) {
  auto frame = std::make_shared<Frame>();
  frame->index = next_index_++;
  frame->timestamp = at;
  frame->image = std::move(image);
  ring_.push_back(std::move(frame));
  while (ring_.size() > config_.ring_capacity) ring_.pop_front();
}

void Capture::inject(Image image, Tick at) {
  std::lock_guard<std::mutex> lock(mutex_);
  push_locked(std::move(image), at);
}

VideoClip Capture::clip_since_last_action() {
  std::lock_guard<std::mutex> lock(mutex_);
  VideoClip clip;
  clip.fps = config_.fps;
  clip.marker_start = action_marker_;
  clip.marker_end = clock_.now();
  for (const auto& f : ring_) {
    if (f->timestamp > action_marker_ && f->timestamp <= clip.marker_end)
      clip.frames.push_back(f);
  }
  if (clip.frames.empty())
    raise(errc::empty_clip, "no frames captured since the last action");
  action_marker_ = clip.marker_end;
  return clip;
}

void Capture::mark_action_boundary() {
  std::lock_guard<std::mutex> lock(mutex_);
  action_marker_ = clock_.now();
}

std::size_t Capture::frame_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return ring_.size();
}

std::size_t Capture::frames_since_marker() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::size_t n = 0;
  for (const auto& f : ring_)
    if (f->timestamp > action_marker_) ++n;
  return n;
}

std::int64_t Capture::total_captured() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return next_index_;
}

std::unique_ptr<Capture> start_capture(FrameSource& source, SimClock& clock,
                                       const CaptureConfig& config) {
  return std::make_unique<Capture>(source, clock, config);
}

void stop_capture(Capture& capture) { capture.stop(); }

}  // namespace cradle::obs
