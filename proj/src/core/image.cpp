#include "cradle/core/image.hpp"

#include <cassert>
#include <cstdlib>

namespace cradle {

double rect_iou(const Rect& a, const Rect& b) {
  Rect inter = a.intersect(b);
  if (!inter.valid()) return 0.0;
  double ia = static_cast<double>(inter.area());
  double ua = static_cast<double>(a.area() + b.area()) - ia;
  return ua > 0 ? ia / ua : 0.0;
}

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height * 3) {
  if (fill.r == fill.g && fill.g == fill.b) {
    std::fill(data_.begin(), data_.end(), fill.r);
  } else {
    for (std::size_t i = 0; i < data_.size(); i += 3) {
      data_[i] = fill.r;
      data_[i + 1] = fill.g;
      data_[i + 2] = fill.b;
    }
  }
}

void Image::fill_rect(const Rect& r, Rgb c) {
  Rect clipped = r.intersect(bounds());
  for (int y = clipped.y0; y < clipped.y1; ++y)
    for (int x = clipped.x0; x < clipped.x1; ++x) set_pixel(x, y, c);
}

void Image::draw_rect_border(const Rect& r, Rgb c, int thickness) {
  for (int t = 0; t < thickness; ++t) {
    Rect ring{r.x0 + t, r.y0 + t, r.x1 - t, r.y1 - t};
    if (!ring.valid()) return;
    for (int x = ring.x0; x < ring.x1; ++x) {
      set_pixel_clipped(x, ring.y0, c);
      set_pixel_clipped(x, ring.y1 - 1, c);
    }
    for (int y = ring.y0; y < ring.y1; ++y) {
      set_pixel_clipped(ring.x0, y, c);
      set_pixel_clipped(ring.x1 - 1, y, c);
    }
  }
}

void Image::blit(const Image& src, int x, int y) {
  for (int sy = 0; sy < src.height(); ++sy) {
    int dy = y + sy;
    if (dy < 0 || dy >= height_) continue;
    for (int sx = 0; sx < src.width(); ++sx) {
      int dx = x + sx;
      if (dx < 0 || dx >= width_) continue;
      set_pixel(dx, dy, src.pixel(sx, sy));
    }
  }
}

Image Image::crop(const Rect& r) const {
  Rect clipped = r.intersect(bounds());
  if (!clipped.valid()) return Image{};
  Image out(clipped.width(), clipped.height());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      out.set_pixel(x, y, pixel(clipped.x0 + x, clipped.y0 + y));
  return out;
}

double region_difference(const Image& a, const Image& b, const Rect& region) {
  assert(a.width() == b.width() && a.height() == b.height());
  long long total = 0;
  long long count = 0;
  for (int y = region.y0; y < region.y1; ++y) {
    for (int x = region.x0; x < region.x1; ++x) {
      Rgb pa = a.pixel(x, y);
      Rgb pb = b.pixel(x, y);
      total += std::abs(int(pa.r) - int(pb.r)) + std::abs(int(pa.g) - int(pb.g)) +
               std::abs(int(pa.b) - int(pb.b));
      count += 3;
    }
  }
  if (count == 0) return 0.0;
  return static_cast<double>(total) / (255.0 * static_cast<double>(count));
}

}  // namespace cradle
