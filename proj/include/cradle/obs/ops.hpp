#pragma once

#include <vector>

#include "cradle/obs/frame.hpp"

namespace cradle::obs {

/// Keyframe discovery by text-region change: a frame is retained when the
/// mean per-pixel difference inside `text_region` against the previously
/// retained keyframe exceeds `threshold`. The first frame is always kept.
std::vector<FramePtr> extract_keyframes(const VideoClip& clip, Rect text_region,
                                        double threshold);

/// Uniform sampling indices: all of 0..n-1 when n <= max_n, otherwise
/// round(i*(n-1)/(max_n-1)) for i in 0..max_n-1, deduplicated in order.
std::vector<int> sample_indices(int n, int max_n);

std::vector<FramePtr> sample_frames(const VideoClip& clip, int max_n);

/// Nearest-neighbor downscale. When aspect ratios differ the content is
/// letterboxed (black bars) inside the target.
Image downscale(const Image& source, int target_w, int target_h);
Frame downscale(const Frame& frame, int target_w, int target_h);

/// Scales to `target_w` wide keeping aspect (reflection frames).
Image downscale_to_width(const Image& source, int target_w);

/// Clip persistence: one PNG per frame plus a line-oriented manifest
/// carrying fps, the marker interval and per-frame index/timestamp.
void save_clip(const VideoClip& clip, const std::string& dir);
VideoClip load_clip(const std::string& dir);

}  // namespace cradle::obs
