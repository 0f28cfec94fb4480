#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cradle/core/clock.hpp"
#include "cradle/core/image.hpp"

namespace cradle::obs {

struct Frame {
  std::int64_t index = 0;  // monotone within a capture session
  Tick timestamp = 0;
  Image image;

  int width() const { return image.width(); }
  int height() const { return image.height(); }
};

using FramePtr = std::shared_ptr<const Frame>;

struct VideoClip {
  std::vector<FramePtr> frames;
  double fps = 2.0;
  Tick marker_start = 0;  // previous action boundary
  Tick marker_end = 0;    // capture time of the clip

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
};

struct CaptureConfig {
  double fps = 2.0;                 // must lie in (0, 60]
  std::size_t ring_capacity = 600;  // oldest frames evicted beyond this
  int downscale_width = 512;        // reflection-frame target width
};

}  // namespace cradle::obs
