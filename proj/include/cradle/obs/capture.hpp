#pragma once

#include <deque>
#include <memory>
#include <mutex>

#include "cradle/obs/frame.hpp"

namespace cradle::obs {

/// Anything that can be screenshotted.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual Image render_surface() = 0;
};

/// Bounded frame ring fed from a FrameSource as the clock advances.
/// The producer hook runs inside clock advances (including those caused by
/// sync primitives sleeping), so capture never blocks the executor. Ring
/// access is internally synchronized.
class Capture {
 public:
  Capture(FrameSource& source, SimClock& clock, CaptureConfig config);
  ~Capture();

  Capture(const Capture&) = delete;
  Capture& operator=(const Capture&) = delete;

  void stop();

  /// Test/tooling path: push an already-rendered frame at a given tick.
  void inject(Image image, Tick at);

  /// Frames captured since the last action boundary; advances the boundary.
  /// Throws EmptyClip when nothing new arrived.
  VideoClip clip_since_last_action();

  /// Marks "the last action ended now"; the next clip starts after this.
  void mark_action_boundary();

  std::size_t frame_count() const;
  std::size_t frames_since_marker() const;
  std::int64_t total_captured() const;
  const CaptureConfig& config() const { return config_; }

 private:
  void on_advance(Tick from, Tick to);
  void push_locked(Image image, Tick at);

  FrameSource& source_;
  SimClock& clock_;
  CaptureConfig config_;
  int observer_id_ = -1;
  Tick ticks_per_frame_;

  mutable std::mutex mutex_;
  std::deque<FramePtr> ring_;
  std::int64_t next_index_ = 0;
  Tick next_capture_ = 0;
  Tick action_marker_ = 0;
};

/// Spec-shaped convenience wrappers.
std::unique_ptr<Capture> start_capture(FrameSource& source, SimClock& clock,
                                       const CaptureConfig& config);
void stop_capture(Capture& capture);

}  // namespace cradle::obs
