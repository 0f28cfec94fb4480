#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cradle/core/image.hpp"

namespace cradle {

// Minimal PNG support: 8-bit RGB/RGBA/grayscale, non-interlaced. Enough for
// frame persistence, template assets and provider payloads.
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(const std::uint8_t* data, std::size_t size);
Image decode_png(const std::vector<std::uint8_t>& data);

void write_png_file(const Image& image, const std::string& path);
Image read_png_file(const std::string& path);

}  // namespace cradle
