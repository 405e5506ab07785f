#include "fractal/coloring.hpp"

#include <stdexcept>

namespace fractal {

void Palette::validate() const {
    if (entries.size() < 2) {
        throw std::invalid_argument("palette '" + name + "' needs at least two entries");
    }
}

RgbImage colorize(const IterationGrid& g, const Palette& p) {
    p.validate();
    RgbImage img;
    img.width_px = g.width_px;
    img.height_px = g.height_px;
    img.pixels.resize(g.counts.size());
    const auto n = static_cast<std::int64_t>(p.entries.size());
    for (std::size_t i = 0; i < g.counts.size(); ++i) {
        const std::int32_t count = g.counts[i];
        img.pixels[i] = count >= g.max_iter ? p.interior_color
                                            : p.entries[static_cast<std::size_t>(count % n)];
    }
    return img;
}

const std::vector<Palette>& builtin_palettes() {
    static const std::vector<Palette> palettes{
        {"classic",
         {{0, 0, 64},      {17, 17, 77},    {34, 34, 89},    {51, 51, 102},
          {68, 68, 115},   {85, 85, 128},   {102, 102, 140}, {119, 119, 153},
          {136, 136, 166}, {153, 153, 179}, {170, 170, 191}, {187, 187, 204},
          {204, 204, 217}, {221, 221, 230}, {238, 238, 242}, {255, 255, 255}},
         {0, 0, 0}},
        {"fire",
         {{0, 0, 0},     {34, 0, 0},    {68, 0, 0},    {102, 0, 0},
          {136, 0, 0},   {170, 0, 0},   {204, 0, 0},   {238, 0, 0},
          {255, 17, 0},  {255, 51, 0},  {255, 85, 0},  {255, 119, 0},
          {255, 153, 0}, {255, 187, 0}, {255, 221, 0}, {255, 255, 0}},
         {0, 0, 0}},
    };
    return palettes;
}

const Palette& find_palette(std::string_view name) {
    for (const Palette& p : builtin_palettes()) {
        if (p.name == name) {
            return p;
        }
    }
    throw std::out_of_range("unknown palette: " + std::string(name));
}

}  // namespace fractal
