#include <filesystem>
#include "doctest.h"

#include "cradle/core/error.hpp"
#include "cradle/obs/capture.hpp"
#include "cradle/obs/ops.hpp"

using namespace cradle;
using namespace cradle::obs;

namespace {

/// Source that renders a solid color which changes when told to.
struct ColorSource : FrameSource {
  Rgb color{10, 10, 10};
  int w = 32, h = 24;
  Image render_surface() override { return Image(w, h, color); }
};

VideoClip make_clip(const std::vector<Image>& images) {
  VideoClip clip;
  clip.fps = 2.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto f = std::make_shared<Frame>();
    f->index = static_cast<std::int64_t>(i);
    f->timestamp = static_cast<Tick>(i + 1);
    f->image = images[i];
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

}  // namespace

TEST_CASE("capture at fps 2 with half-second ticks yields one frame per tick") {
  ColorSource src;
  SimClock clock(2);  // tick = 0.5 s
  Capture cap(src, clock, CaptureConfig{2.0, 600, 512});
  clock.advance(10);
  CHECK(cap.frame_count() == 10);
}

TEST_CASE("fps outside (0,60] is rejected") {
  ColorSource src;
  SimClock clock(100);
  CHECK_THROWS_AS(Capture(src, clock, CaptureConfig{0.0, 600, 512}), Error);
  CHECK_THROWS_AS(Capture(src, clock, CaptureConfig{61.0, 600, 512}), Error);
}

TEST_CASE("ring evicts oldest beyond capacity") {
  ColorSource src;
  SimClock clock(1);
  Capture cap(src, clock, CaptureConfig{1.0, 5, 512});
  clock.advance(8);
  CHECK(cap.frame_count() == 5);
  VideoClip clip = cap.clip_since_last_action();
  CHECK(clip.frames.front()->index == 3);  // frames 0..2 evicted
}

TEST_CASE("clip since last action spans exactly the new frames") {
  ColorSource src;
  SimClock clock(1);
  Capture cap(src, clock, CaptureConfig{1.0, 600, 512});
  CHECK_THROWS_AS(cap.clip_since_last_action(), Error);  // nothing yet

  clock.advance(4);
  VideoClip first = cap.clip_since_last_action();
  CHECK(first.size() == 4);

  // a second call without new frames is an EmptyClip error
  CHECK_THROWS_AS(cap.clip_since_last_action(), Error);

  clock.advance(2);
  VideoClip second = cap.clip_since_last_action();
  CHECK(second.size() == 2);
  CHECK(second.frames.front()->index == 4);
}

TEST_CASE("capture during long clock advances loses nothing up to capacity") {
  ColorSource src;
  SimClock clock(100);
  Capture cap(src, clock, CaptureConfig{50.0, 2000, 512});
  clock.advance(2000);  // 20 seconds at 50 fps = 1000 frames
  CHECK(cap.frame_count() == 1000);
}

TEST_CASE("keyframes: identical frames give exactly one") {
  std::vector<Image> images(6, Image(20, 10, Rgb{50, 50, 50}));
  VideoClip clip = make_clip(images);
  auto kf = extract_keyframes(clip, Rect{0, 0, 20, 10}, 0.05);
  REQUIRE(kf.size() == 1);
  CHECK(kf[0]->index == 0);
}

TEST_CASE("keyframes: subtitle change at frame 5 is detected") {
  std::vector<Image> images(8, Image(20, 10, Rgb{50, 50, 50}));
  Rect subtitle{0, 8, 20, 10};
  for (std::size_t i = 5; i < images.size(); ++i)
    images[i].fill_rect(subtitle, Rgb{255, 255, 255});
  VideoClip clip = make_clip(images);
  auto kf = extract_keyframes(clip, subtitle, 0.1);

  // brute-force oracle over all frames
  std::vector<int> expected = {0};
  const Image* last = &images[0];
  for (std::size_t i = 1; i < images.size(); ++i) {
    if (region_difference(*last, images[i], subtitle) > 0.1) {
      expected.push_back(static_cast<int>(i));
      last = &images[i];
    }
  }
  REQUIRE(kf.size() == expected.size());
  for (std::size_t i = 0; i < kf.size(); ++i)
    CHECK(kf[i]->index == expected[i]);
  CHECK(kf[1]->index == 5);
}

TEST_CASE("keyframes: noise below threshold is ignored") {
  std::vector<Image> images;
  for (int i = 0; i < 6; ++i) {
    Image img(20, 10, Rgb{100, 100, 100});
    img.set_pixel(i, 0, Rgb{101, 101, 101});  // one-pixel flicker
    images.push_back(img);
  }
  VideoClip clip = make_clip(images);
  CHECK(extract_keyframes(clip, Rect{0, 0, 20, 10}, 0.999).size() == 1);
}

TEST_CASE("keyframes: region outside bounds is rejected") {
  VideoClip clip = make_clip({Image(20, 10, Rgb{0, 0, 0})});
  CHECK_THROWS_AS(extract_keyframes(clip, Rect{0, 0, 30, 10}, 0.1), Error);
}

TEST_CASE("sample indices match the rounding formula") {
  CHECK(sample_indices(3, 8) == std::vector<int>{0, 1, 2});
  CHECK(sample_indices(8, 8) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(sample_indices(20, 8) == std::vector<int>{0, 3, 5, 8, 11, 14, 16, 19});
}

TEST_CASE("sample indices: exhaustive properties for n in [1,200]") {
  for (int n = 1; n <= 200; ++n) {
    auto idx = sample_indices(n, 8);
    CHECK(idx.size() <= 8);
    REQUIRE(!idx.empty());
    CHECK(idx.front() == 0);
    if (n >= 2) CHECK(idx.back() == n - 1);
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i] > idx[i - 1]);
    // integer-arithmetic oracle: round half up of i*(n-1)/7
    if (n > 8) {
      std::vector<int> expected;
      for (int i = 0; i < 8; ++i) {
        int v = static_cast<int>((2ll * i * (n - 1) + 7) / 14ll);
        if (expected.empty() || expected.back() != v) expected.push_back(v);
      }
      CHECK(idx == expected);
    }
  }
}

TEST_CASE("downscale identity when target equals source") {
  Image img(16, 9, Rgb{0, 0, 0});
  img.set_pixel(3, 4, Rgb{9, 9, 9});
  CHECK(downscale(img, 16, 9) == img);
}

TEST_CASE("downscale checkerboard keeps one sample per block") {
  Image img(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      img.set_pixel(x, y, ((x / 2 + y / 2) % 2 == 0) ? Rgb{255, 255, 255}
                                                     : Rgb{0, 0, 0});
  Image small = downscale(img, 2, 2);
  CHECK(small.pixel(0, 0) == Rgb{255, 255, 255});
  CHECK(small.pixel(1, 0) == Rgb{0, 0, 0});
  CHECK(small.pixel(0, 1) == Rgb{0, 0, 0});
  CHECK(small.pixel(1, 1) == Rgb{255, 255, 255});
}

TEST_CASE("downscale 16:9 to 16:9 has no letterbox") {
  Image img(1920, 1080, Rgb{200, 0, 0});
  Image small = downscale(img, 512, 288);
  // no black bars anywhere
  CHECK(small.pixel(0, 0) == Rgb{200, 0, 0});
  CHECK(small.pixel(511, 287) == Rgb{200, 0, 0});
}

TEST_CASE("sample indices degenerate cap of one keeps only the first frame") {
  CHECK(sample_indices(50, 1) == std::vector<int>{0});
  CHECK(sample_indices(1, 1) == std::vector<int>{0});
}

TEST_CASE("clip save/load round trip through PNGs and a manifest") {
  namespace fs = std::filesystem;
  std::vector<Image> images;
  for (int i = 0; i < 3; ++i) {
    Image img(16, 12, Rgb{static_cast<std::uint8_t>(40 + i * 10), 20, 30});
    img.set_pixel(i, i, Rgb{255, 255, 255});
    images.push_back(img);
  }
  VideoClip clip = make_clip(images);
  clip.marker_start = 5;
  clip.marker_end = 42;

  fs::path dir = fs::temp_directory_path() / "cradle_clip_test";
  fs::remove_all(dir);
  save_clip(clip, dir.string());
  VideoClip back = load_clip(dir.string());

  REQUIRE(back.size() == clip.size());
  CHECK(back.fps == clip.fps);
  CHECK(back.marker_start == 5);
  CHECK(back.marker_end == 42);
  for (std::size_t i = 0; i < clip.size(); ++i) {
    CHECK(back.frames[i]->index == clip.frames[i]->index);
    CHECK(back.frames[i]->timestamp == clip.frames[i]->timestamp);
    CHECK(back.frames[i]->image == clip.frames[i]->image);
  }
  fs::remove_all(dir);
}

TEST_CASE("downscale letterboxes mismatched aspect ratios") {
  Image img(100, 100, Rgb{0, 200, 0});
  Image small = downscale(img, 50, 26);  // wider target: side bars
  CHECK(small.pixel(0, 13) == Rgb{0, 0, 0});
  CHECK(small.pixel(25, 13) == Rgb{0, 200, 0});
  CHECK_THROWS_AS(downscale(img, 0, 10), Error);
  CHECK_THROWS_AS(downscale(img, 200, 10), Error);
}
