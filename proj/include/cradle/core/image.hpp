#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace cradle {

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

/// Half-open pixel rectangle [x0,x1) x [y0,y1).
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool operator==(const Rect&) const = default;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long long area() const {
    return static_cast<long long>(std::max(0, width())) * std::max(0, height());
  }
  bool valid() const { return x0 < x1 && y0 < y1; }
  bool contains(Point p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }
  Rect intersect(const Rect& r) const {
    return Rect{std::max(x0, r.x0), std::max(y0, r.y0), std::min(x1, r.x1),
                std::min(y1, r.y1)};
  }
};

double rect_iou(const Rect& a, const Rect& b);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Owning 8-bit RGB raster. Value type; copies are deep.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = Rgb{0, 0, 0});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  Rect bounds() const { return Rect{0, 0, width_, height_}; }

  Rgb pixel(int x, int y) const {
    const std::uint8_t* p = &data_[index(x, y)];
    return Rgb{p[0], p[1], p[2]};
  }
  void set_pixel(int x, int y, Rgb c) {
    std::uint8_t* p = &data_[index(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  /// set_pixel that silently ignores out-of-bounds writes.
  void set_pixel_clipped(int x, int y, Rgb c) {
    if (x >= 0 && x < width_ && y >= 0 && y < height_) set_pixel(x, y, c);
  }

  void fill_rect(const Rect& r, Rgb c);
  void draw_rect_border(const Rect& r, Rgb c, int thickness = 1);
  /// Copies src into this image with src's (0,0) at (x,y), clipping.
  void blit(const Image& src, int x, int y);
  Image crop(const Rect& r) const;

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  bool operator==(const Image& other) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Mean absolute per-channel difference inside `region`, normalized to [0,1].
/// Images must share dimensions and the region must be inside bounds.
double region_difference(const Image& a, const Image& b, const Rect& region);

}  // namespace cradle
