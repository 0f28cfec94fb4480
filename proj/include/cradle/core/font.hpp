#pragma once

#include <optional>
#include <string>

#include "cradle/core/image.hpp"

namespace cradle {

// Embedded 5x7 bitmap font (digits, upper-case letters, basic punctuation).
// Lower-case input is mapped to upper-case; unknown characters render as a
// filled box. Rendering is deterministic, which is all the tests rely on.

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphAdvance = 6;  // one column of spacing

/// Pixel extent of `text` at the given scale (no trailing spacing column).
Point text_extent(const std::string& text, int scale = 1);

/// Draws text with top-left corner at (x, y). Writes outside the image are
/// clipped. When `background` is set, the glyph cell is filled first.
void draw_text(Image& img, int x, int y, const std::string& text, Rgb color,
               std::optional<Rgb> background = std::nullopt, int scale = 1);

/// Same, but pixels are also clipped against `clip`.
void draw_text_clipped(Image& img, int x, int y, const std::string& text,
                       Rgb color, const Rect& clip,
                       std::optional<Rgb> background = std::nullopt,
                       int scale = 1);

}  // namespace cradle
