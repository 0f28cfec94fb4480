#include "cradle/obs/ops.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/png.hpp"
#include "cradle/core/text.hpp"

namespace cradle::obs {

std::vector<FramePtr> extract_keyframes(const VideoClip& clip, Rect text_region,
                                        double threshold) {
  if (clip.empty()) raise(errc::empty_clip, "empty clip");
  if (!(threshold > 0.0 && threshold < 1.0))
    raise(errc::config_error, "threshold must lie in (0,1)");
  const Image& first = clip.frames.front()->image;
  if (!first.bounds().contains(text_region) || !text_region.valid())
    raise(errc::region_out_of_bounds, "text region outside frame bounds");

  std::vector<FramePtr> keyframes;
  keyframes.push_back(clip.frames.front());
  const Frame* last_kept = clip.frames.front().get();
  for (std::size_t i = 1; i < clip.frames.size(); ++i) {
    const Frame& f = *clip.frames[i];
    if (region_difference(last_kept->image, f.image, text_region) > threshold) {
      keyframes.push_back(clip.frames[i]);
      last_kept = &f;
    }
  }
  return keyframes;
}

std::vector<int> sample_indices(int n, int max_n) {
  if (n <= 0 || max_n < 1) return {};
  std::vector<int> out;
  if (n <= max_n) {
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  if (max_n == 1) return {0};
  for (int i = 0; i < max_n; ++i) {
    int idx = static_cast<int>(std::llround(
        static_cast<double>(i) * (n - 1) / static_cast<double>(max_n - 1)));
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

std::vector<FramePtr> sample_frames(const VideoClip& clip, int max_n) {
  if (max_n < 1) raise(errc::config_error, "max_n must be >= 1");
  if (clip.empty()) raise(errc::empty_clip, "empty clip");
  std::vector<FramePtr> out;
  for (int idx : sample_indices(static_cast<int>(clip.size()), max_n))
    out.push_back(clip.frames[static_cast<std::size_t>(idx)]);
  return out;
}

Image downscale(const Image& source, int target_w, int target_h) {
  if (target_w <= 0 || target_h <= 0 || target_w > source.width() ||
      target_h > source.height())
    raise(errc::invalid_target, "target must be positive and <= source dims");

  // letterbox when the aspect ratios differ
  long long lhs = static_cast<long long>(source.width()) * target_h;
  long long rhs = static_cast<long long>(source.height()) * target_w;
  int content_w = target_w;
  int content_h = target_h;
  if (lhs > rhs) {
    content_h = static_cast<int>(rhs / source.width());
    content_h = std::max(content_h, 1);
  } else if (lhs < rhs) {
    content_w = static_cast<int>(lhs / source.height());
    content_w = std::max(content_w, 1);
  }
  int off_x = (target_w - content_w) / 2;
  int off_y = (target_h - content_h) / 2;

  Image out(target_w, target_h, Rgb{0, 0, 0});
  for (int y = 0; y < content_h; ++y) {
    int sy = static_cast<int>(static_cast<long long>(y) * source.height() / content_h);
    for (int x = 0; x < content_w; ++x) {
      int sx = static_cast<int>(static_cast<long long>(x) * source.width() / content_w);
      out.set_pixel(off_x + x, off_y + y, source.pixel(sx, sy));
    }
  }
  return out;
}

Frame downscale(const Frame& frame, int target_w, int target_h) {
  Frame out;
  out.index = frame.index;
  out.timestamp = frame.timestamp;
  out.image = downscale(frame.image, target_w, target_h);
  return out;
}

Image downscale_to_width(const Image& source, int target_w) {
  if (target_w >= source.width()) return source;
  long long th = static_cast<long long>(source.height()) * target_w / source.width();
  return downscale(source, target_w, static_cast<int>(std::max(1ll, th)));
}

void save_clip(const VideoClip& clip, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream manifest;
  manifest << "clip v1\n";
  manifest << "fps " << clip.fps << "\n";
  manifest << "markers " << clip.marker_start << " " << clip.marker_end << "\n";
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const Frame& f = *clip.frames[i];
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.png", i);
    write_png_file(f.image, (fs::path(dir) / name).string());
    manifest << "frame " << name << " " << f.index << " " << f.timestamp << "\n";
  }
  write_text_file((fs::path(dir) / "manifest.txt").string(), manifest.str());
}

VideoClip load_clip(const std::string& dir) {
  namespace fs = std::filesystem;
  std::string manifest = read_text_file((fs::path(dir) / "manifest.txt").string());
  auto lines = split_lines(manifest);
  if (lines.empty() || lines[0] != "clip v1")
    raise(errc::corrupt_entry, "bad clip manifest in " + dir);
  VideoClip clip;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto parts = split(trim(lines[i]), ' ');
    if (parts.empty() || parts[0].empty()) continue;
    if (parts[0] == "fps" && parts.size() == 2) {
      clip.fps = std::stod(parts[1]);
    } else if (parts[0] == "markers" && parts.size() == 3) {
      clip.marker_start = std::stoll(parts[1]);
      clip.marker_end = std::stoll(parts[2]);
    } else if (parts[0] == "frame" && parts.size() == 4) {
      auto frame = std::make_shared<Frame>();
      frame->image = read_png_file((fs::path(dir) / parts[1]).string());
      frame->index = std::stoll(parts[2]);
      frame->timestamp = std::stoll(parts[3]);
      clip.frames.push_back(std::move(frame));
    } else {
      raise(errc::corrupt_entry, "bad manifest line: " + lines[i]);
    }
  }
  if (clip.frames.empty()) raise(errc::empty_clip, "clip directory holds no frames");
  return clip;
}

}  // namespace cradle::obs
