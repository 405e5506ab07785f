#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fractal/render.hpp"

namespace fractal {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(Rgb, Rgb) = default;
};

struct Palette {
    std::string name;
    std::vector<Rgb> entries;  // at least two
    Rgb interior_color{};

    void validate() const;
};

struct RgbImage {
    int width_px = 0;
    int height_px = 0;
    std::vector<Rgb> pixels;  // row-major

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Discrete banding: max_iter -> interior color, otherwise entries[count mod size].
RgbImage colorize(const IterationGrid& g, const Palette& p);

// "classic": dark blue to white, 16 entries. "fire": black to red to yellow,
// 16 entries. Both use a black interior.
const std::vector<Palette>& builtin_palettes();

// Throws std::out_of_range for names not in builtin_palettes().
const Palette& find_palette(std::string_view name);

}  // namespace fractal
