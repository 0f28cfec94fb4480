#include "cradle/aug/ops.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/font.hpp"
#include "cradle/core/png.hpp"
#include "cradle/core/text.hpp"

namespace cradle::aug {
namespace {

constexpr Rgb kGridLine{255, 255, 255};
constexpr Rgb kBlue{0, 0, 255};
constexpr Rgb kYellow{255, 255, 0};
constexpr Rgb kMagenta{255, 0, 255};
constexpr Rgb kPadFill{32, 32, 32};
constexpr int kGridLineWidth = 2;

// 12-color cycle for standard-style borders; the choice is arbitrary but
// fixed so renders are reproducible.
constexpr Rgb kPalette[12] = {
    {230, 25, 75},  {60, 180, 75},   {0, 130, 200},  {245, 130, 48},
    {145, 30, 180}, {70, 240, 240},  {240, 50, 230}, {210, 245, 60},
    {250, 190, 190}, {0, 128, 128},  {170, 110, 40}, {128, 0, 0}};

// 11x17 cursor arrow, row-major bitmask (LSB = left pixel).
constexpr std::uint16_t kCursorRows[17] = {
    0b00000000001, 0b00000000011, 0b00000000111, 0b00000001111,
    0b00000011111, 0b00000111111, 0b00001111111, 0b00011111111,
    0b00111111111, 0b01111111111, 0b11111111111, 0b00001111111,
    0b00011100111, 0b00011000111, 0b00110000011, 0b00110000001,
    0b00000000000};

bool sort_key_less(const Rect& a, const Rect& b) {
  if (a.y0 != b.y0) return a.y0 < b.y0;
  if (a.x0 != b.x0) return a.x0 < b.x0;
  if (a.y1 != b.y1) return a.y1 < b.y1;
  return a.x1 < b.x1;
}

}  // namespace

const Mark* MarkSet::find(int id) const {
  for (const auto& m : marks)
    if (m.id == id) return &m;
  return nullptr;
}

std::string serialize_marks(const MarkSet& set) {
  std::ostringstream ss;
  for (const auto& m : set.marks) {
    ss << m.id << " " << m.rect.x0 << " " << m.rect.y0 << " " << m.rect.x1
       << " " << m.rect.y1 << " " << m.score << "\n";
  }
  return ss.str();
}

MarkSet parse_marks(const std::string& text) {
  MarkSet set;
  for (const auto& line : split_lines(text)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    Mark m;
    if (!(ss >> m.id >> m.rect.x0 >> m.rect.y0 >> m.rect.x1 >> m.rect.y1 >>
          m.score))
      raise(errc::corrupt_entry, "bad mark line: " + line);
    set.marks.push_back(m);
  }
  return set;
}

GridResult draw_grid(const Image& frame, const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1)
    raise(errc::config_error, "grid must have at least one cell");
  GridResult result;
  result.image = frame;

  auto col_edge = [&](int c) {
    return static_cast<int>(static_cast<long long>(c) * frame.width() / spec.cols);
  };
  auto row_edge = [&](int r) {
    return static_cast<int>(static_cast<long long>(r) * frame.height() / spec.rows);
  };

  int id = 1;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      Rect cell{col_edge(c), row_edge(r), col_edge(c + 1), row_edge(r + 1)};
      result.cells[id++] = cell;
    }
  }

  // interior grid lines
  for (int c = 1; c < spec.cols; ++c) {
    int x = col_edge(c);
    result.image.fill_rect(Rect{x - kGridLineWidth / 2, 0,
                                x - kGridLineWidth / 2 + kGridLineWidth,
                                frame.height()},
                           kGridLine);
  }
  for (int r = 1; r < spec.rows; ++r) {
    int y = row_edge(r);
    result.image.fill_rect(
        Rect{0, y - kGridLineWidth / 2, frame.width(),
             y - kGridLineWidth / 2 + kGridLineWidth},
        kGridLine);
  }

  // white coordinate label per cell (the cell's center pixel position)
  for (const auto& [cell_id, cell] : result.cells) {
    Point c = centroid(cell);
    std::string label = std::to_string(c.x) + "," + std::to_string(c.y);
    draw_text_clipped(result.image, cell.x0 + kGridLineWidth + 1,
                      cell.y0 + kGridLineWidth + 1, label, kGridLine, cell);
  }
  return result;
}

Image draw_side_bands(const Image& frame, int band_width) {
  if (frame.width() <= 2 * band_width)
    raise(errc::frame_too_narrow,
          "frame must be wider than twice the band width");
  Image out = frame;
  out.fill_rect(Rect{0, 0, band_width, frame.height()}, kBlue);
  out.fill_rect(Rect{frame.width() - band_width, 0, frame.width(), frame.height()},
                kYellow);
  return out;
}

Image draw_pointer(const Image& frame, Point pos) {
  if (!frame.bounds().contains(pos))
    raise(errc::coordinate_out_of_bounds, "pointer outside frame");
  Image out = frame;
  for (int row = 0; row < 17; ++row) {
    for (int col = 0; col < 11; ++col) {
      if (kCursorRows[row] & (1u << col))
        out.set_pixel_clipped(pos.x + col, pos.y + row, kMagenta);
    }
  }
  return out;
}

std::vector<Proposal> ColorComponentSegmenter::propose(const Image& frame) {
  const int w = frame.width();
  const int h = frame.height();
  if (w == 0 || h == 0) return {};

  auto quant = [&](int x, int y) -> int {
    Rgb p = frame.pixel(x, y);
    return (p.r / quant_step_) * 64 * 64 + (p.g / quant_step_) * 64 +
           (p.b / quant_step_);
  };

  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<Proposal> out;
  std::vector<std::pair<int, int>> stack;

  int next_label = 0;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (label[static_cast<std::size_t>(sy) * w + sx] != -1) continue;
      int color = quant(sx, sy);
      int cur = next_label++;
      long long count = 0;
      bool touches_border = false;
      Rect box{sx, sy, sx + 1, sy + 1};
      stack.push_back({sx, sy});
      label[static_cast<std::size_t>(sy) * w + sx] = cur;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        ++count;
        box.x0 = std::min(box.x0, x);
        box.y0 = std::min(box.y0, y);
        box.x1 = std::max(box.x1, x + 1);
        box.y1 = std::max(box.y1, y + 1);
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) touches_border = true;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
            if (label[idx] != -1) continue;
            if (quant(nx, ny) != color) continue;
            label[idx] = cur;
            stack.push_back({nx, ny});
          }
        }
      }
      if (touches_border) continue;  // background
      if (count < min_area_) continue;
      double fill = static_cast<double>(count) / static_cast<double>(box.area());
      out.push_back(Proposal{box, fill});
    }
  }
  return out;
}

MarkSet segment_to_marks(const Image& frame, Segmenter& segmenter) {
  std::vector<Proposal> proposals;
  try {
    proposals = segmenter.propose(frame);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(errc::segmenter_failure, e.what());
  }

  std::sort(proposals.begin(), proposals.end(),
            [](const Proposal& a, const Proposal& b) {
              return sort_key_less(a.rect, b.rect);
            });

  MarkSet set;
  for (const auto& p : proposals) {
    if (!p.rect.valid() || !frame.bounds().contains(p.rect))
      raise(errc::segmenter_failure, "proposal outside frame bounds");
    bool duplicate = false;
    for (const auto& kept : set.marks) {
      if (rect_iou(kept.rect, p.rect) > 0.9) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate)
      set.marks.push_back(Mark{static_cast<int>(set.marks.size()) + 1, p.rect,
                               p.score});
  }
  return set;
}

Image render_marks(const Image& frame, const MarkSet& marks, MarkStyle style) {
  if (style == MarkStyle::uniform) {
    Image out = frame;
    for (const auto& m : marks.marks) {
      out.draw_rect_border(m.rect, kPalette[0], 1);
      // label clipped to the mark rect, so it can never escape the box
      draw_text_clipped(out, m.rect.x0 + 1, m.rect.y0 + 1, std::to_string(m.id),
                        Rgb{0, 0, 0}, m.rect, Rgb{255, 255, 255});
      }
    return out;
  }

  // standard style: labels sit just above the box's top-left corner and the
  // frame is padded so every label pixel stays inside the output raster
  int pad_top = 0, pad_left = 0, pad_right = 0;
  for (const auto& m : marks.marks) {
    Point ext = text_extent(std::to_string(m.id));
    int label_top = m.rect.y0 - ext.y - 1;
    if (label_top < 0) pad_top = std::max(pad_top, -label_top);
    if (m.rect.x0 < 0) pad_left = std::max(pad_left, -m.rect.x0);
    int label_right = m.rect.x0 + ext.x;
    if (label_right > frame.width())
      pad_right = std::max(pad_right, label_right - frame.width());
  }

  Image out(frame.width() + pad_left + pad_right, frame.height() + pad_top,
            kPadFill);
  out.blit(frame, pad_left, pad_top);
  for (const auto& m : marks.marks) {
    Rgb color = kPalette[(m.id - 1) % 12];
    Rect shifted{m.rect.x0 + pad_left, m.rect.y0 + pad_top,
                 m.rect.x1 + pad_left, m.rect.y1 + pad_top};
    out.draw_rect_border(shifted, color, 1);
    Point ext = text_extent(std::to_string(m.id));
    draw_text(out, shifted.x0, shifted.y0 - ext.y - 1, std::to_string(m.id),
              Rgb{0, 0, 0}, color);
  }
  return out;
}

MarkSet filter_watermarks(const MarkSet& marks, const Image& frame,
                          const Template& watermark) {
  const Image& t = watermark.pixels;
  MarkSet out;
  for (const auto& m : marks.marks) {
    bool is_watermark = false;
    if (m.rect.width() >= t.width() && m.rect.height() >= t.height()) {
      // best correlation of the template anywhere inside the mark's region
      double best = -1.0;
      for (int y = m.rect.y0; y + t.height() <= m.rect.y1 && !is_watermark; ++y) {
        for (int x = m.rect.x0; x + t.width() <= m.rect.x1; ++x) {
          best = std::max(best, ncc_at(frame, t, x, y));
          if (best >= watermark.match_threshold) {
            is_watermark = true;
            break;
          }
        }
      }
    }
    if (!is_watermark) {
      Mark kept = m;
      kept.id = static_cast<int>(out.marks.size()) + 1;
      out.marks.push_back(kept);
    }
  }
  return out;
}

double ncc_at(const Image& frame, const Image& tmpl, int x, int y) {
  const int tw = tmpl.width();
  const int th = tmpl.height();
  const long long n = static_cast<long long>(tw) * th * 3;

  double sum_f = 0, sum_t = 0;
  for (int ty = 0; ty < th; ++ty) {
    for (int tx = 0; tx < tw; ++tx) {
      Rgb pf = frame.pixel(x + tx, y + ty);
      Rgb pt = tmpl.pixel(tx, ty);
      sum_f += pf.r + pf.g + pf.b;
      sum_t += pt.r + pt.g + pt.b;
    }
  }
  double mean_f = sum_f / static_cast<double>(n);
  double mean_t = sum_t / static_cast<double>(n);

  double num = 0, den_f = 0, den_t = 0;
  for (int ty = 0; ty < th; ++ty) {
    for (int tx = 0; tx < tw; ++tx) {
      Rgb pf = frame.pixel(x + tx, y + ty);
      Rgb pt = tmpl.pixel(tx, ty);
      double fv[3] = {double(pf.r), double(pf.g), double(pf.b)};
      double tv[3] = {double(pt.r), double(pt.g), double(pt.b)};
      for (int c = 0; c < 3; ++c) {
        double df = fv[c] - mean_f;
        double dt = tv[c] - mean_t;
        num += df * dt;
        den_f += df * df;
        den_t += dt * dt;
      }
    }
  }
  if (den_f <= 0.0 || den_t <= 0.0) {
    // flat windows: identical means count as a perfect match
    if (den_f <= 0.0 && den_t <= 0.0)
      return std::abs(mean_f - mean_t) < 1e-9 ? 1.0 : 0.0;
    return 0.0;
  }
  return num / std::sqrt(den_f * den_t);
}

std::vector<Detection> match_templates(const Image& frame,
                                       const std::vector<Template>& templates) {
  std::vector<Detection> all;
  for (const auto& t : templates) {
    if (t.pixels.width() > frame.width() || t.pixels.height() > frame.height())
      raise(errc::template_larger_than_frame,
            "template '" + t.name + "' larger than frame");
    std::vector<Detection> hits;
    for (int y = 0; y + t.pixels.height() <= frame.height(); ++y) {
      for (int x = 0; x + t.pixels.width() <= frame.width(); ++x) {
        double score = ncc_at(frame, t.pixels, x, y);
        if (score >= t.match_threshold) {
          hits.push_back(Detection{
              t.name,
              Rect{x, y, x + t.pixels.width(), y + t.pixels.height()}, score});
        }
      }
    }
    // non-max suppression, higher score wins; ties resolved by position
    std::sort(hits.begin(), hits.end(), [](const Detection& a, const Detection& b) {
      if (a.score != b.score) return a.score > b.score;
      return sort_key_less(a.rect, b.rect);
    });
    std::vector<Detection> kept;
    for (const auto& d : hits) {
      bool suppressed = false;
      for (const auto& k : kept) {
        if (rect_iou(k.rect, d.rect) > 0.5) {
          suppressed = true;
          break;
        }
      }
      if (!suppressed) kept.push_back(d);
    }
    std::sort(kept.begin(), kept.end(), [](const Detection& a, const Detection& b) {
      return sort_key_less(a.rect, b.rect);
    });
    all.insert(all.end(), kept.begin(), kept.end());
  }
  return all;
}

std::vector<Template> load_templates(const std::string& dir,
                                     double match_threshold) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    raise(errc::io_error, "template directory not found: " + dir);
  std::vector<Template> out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    Template t;
    t.name = path.stem().string();
    t.pixels = read_png_file(path.string());
    t.match_threshold = match_threshold;
    out.push_back(std::move(t));
  }
  return out;
}

Point centroid(const Rect& rect) {
  return Point{(rect.x0 + rect.x1) / 2, (rect.y0 + rect.y1) / 2};
}

}  // namespace cradle::aug
