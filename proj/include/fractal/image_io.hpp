#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fractal/coloring.hpp"

namespace fractal {

// Binary PPM: "P6\n<w> <h>\n255\n" followed by row-major RGB bytes.
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

// 8-bit RGB PNG, no interlacing, default compression.
std::vector<std::uint8_t> encode_png(const RgbImage& img);

enum class ImageFormat { Ppm, Png };

// Picks the format from the extension (.ppm or .png, case-insensitive).
// Throws std::invalid_argument for anything else.
ImageFormat format_for_path(const std::filesystem::path& path);

// Throws std::runtime_error naming the path on I/O failure.
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_image(const std::filesystem::path& path, const RgbImage& img);

}  // namespace fractal
