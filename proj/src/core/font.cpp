#include "cradle/core/font.hpp"

#include <cctype>
#include <map>

namespace cradle {
namespace {

// Each glyph is 7 rows; the low 5 bits of each byte are the row pattern,
// most significant of those 5 bits on the left.
struct Glyph {
  std::uint8_t rows[7];
};

const std::map<char, Glyph>& glyph_table() {
  static const std::map<char, Glyph> table = {
      {'0', {{0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}},
      {'1', {{0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}}},
      {'2', {{0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}},
      {'3', {{0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}}},
      {'4', {{0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}},
      {'5', {{0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}}},
      {'6', {{0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}},
      {'7', {{0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}}},
      {'8', {{0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}},
      {'9', {{0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}}},
      {'A', {{0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}},
      {'B', {{0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}}},
      {'C', {{0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}},
      {'D', {{0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}}},
      {'E', {{0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}},
      {'F', {{0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}}},
      {'G', {{0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}},
      {'H', {{0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}},
      {'I', {{0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}},
      {'J', {{0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}}},
      {'K', {{0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}},
      {'L', {{0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}}},
      {'M', {{0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}},
      {'N', {{0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}}},
      {'O', {{0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}},
      {'P', {{0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}}},
      {'Q', {{0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}},
      {'R', {{0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}}},
      {'S', {{0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}},
      {'T', {{0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}}},
      {'U', {{0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}},
      {'V', {{0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}}},
      {'W', {{0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}},
      {'X', {{0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}}},
      {'Y', {{0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}}},
      {'Z', {{0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}}},
      {' ', {{0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}}},
      {'(', {{0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}}},
      {')', {{0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}}},
      {',', {{0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}}},
      {'.', {{0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}}},
      {':', {{0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}}},
      {'-', {{0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}}},
      {'+', {{0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}}},
      {'/', {{0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}}},
      {'%', {{0x19, 0x19, 0x02, 0x04, 0x08, 0x13, 0x13}}},
      {'&', {{0x0C, 0x12, 0x14, 0x08, 0x15, 0x12, 0x0D}}},
      {'!', {{0x04, 0x04, 0x04, 0x04, 0x04, 0x00, 0x04}}},
      {'?', {{0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04}}},
      {'=', {{0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}}},
      {'\'', {{0x04, 0x04, 0x08, 0x00, 0x00, 0x00, 0x00}}},
      {'"', {{0x0A, 0x0A, 0x14, 0x00, 0x00, 0x00, 0x00}}},
      {'[', {{0x0E, 0x08, 0x08, 0x08, 0x08, 0x08, 0x0E}}},
      {']', {{0x0E, 0x02, 0x02, 0x02, 0x02, 0x02, 0x0E}}},
      {'_', {{0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}}},
  };
  return table;
}

const Glyph& lookup(char c) {
  static const Glyph box = {{0x1F, 0x1F, 0x1F, 0x1F, 0x1F, 0x1F, 0x1F}};
  char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  auto it = glyph_table().find(up);
  return it == glyph_table().end() ? box : it->second;
}

}  // namespace

Point text_extent(const std::string& text, int scale) {
  if (text.empty()) return Point{0, 0};
  int w = static_cast<int>(text.size()) * kGlyphAdvance - 1;
  return Point{w * scale, kGlyphHeight * scale};
}

void draw_text_clipped(Image& img, int x, int y, const std::string& text,
                       Rgb color, const Rect& clip,
                       std::optional<Rgb> background, int scale) {
  Rect effective = clip.intersect(img.bounds());
  if (background) {
    Point ext = text_extent(text, scale);
    Rect bg = Rect{x, y, x + ext.x, y + ext.y}.intersect(effective);
    if (bg.valid()) img.fill_rect(bg, *background);
  }
  int cx = x;
  for (char c : text) {
    const Glyph& g = lookup(c);
    for (int row = 0; row < kGlyphHeight; ++row) {
      for (int col = 0; col < kGlyphWidth; ++col) {
        if (!(g.rows[row] & (1 << (kGlyphWidth - 1 - col)))) continue;
        for (int sy = 0; sy < scale; ++sy) {
          for (int sx = 0; sx < scale; ++sx) {
            Point p{cx + col * scale + sx, y + row * scale + sy};
            if (effective.contains(p)) img.set_pixel(p.x, p.y, color);
          }
        }
      }
    }
    cx += kGlyphAdvance * scale;
  }
}

void draw_text(Image& img, int x, int y, const std::string& text, Rgb color,
               std::optional<Rgb> background, int scale) {
  draw_text_clipped(img, x, y, text, color, img.bounds(), background, scale);
}

}  // namespace cradle
