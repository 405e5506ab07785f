#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fractal/dynamics.hpp"
#include "fractal/viewport.hpp"

namespace fractal {

// Grids larger than this many cells are refused.
inline constexpr std::uint64_t kMaxGridCells = std::uint64_t{1} << 31;

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Row-major per-pixel escape counts, each in [0, max_iter].
struct IterationGrid {
    int width_px = 0;
    int height_px = 0;
    int max_iter = 0;
    std::vector<std::int32_t> counts;

    std::int32_t at(int px, int py) const { return counts[static_cast<std::size_t>(py) * width_px + px]; }

    friend bool operator==(const IterationGrid&, const IterationGrid&) = default;
};

enum class SetKind { Julia, Mandelbrot };

std::string_view set_kind_name(SetKind k);

struct RenderRequest {
    SetKind set_kind = SetKind::Julia;
    // For Mandelbrot renders params.c is ignored: C comes from the pixel, Z0 = 0.
    EscapeParams params{};
    Viewport viewport{};

    void validate() const;
};

IterationGrid render_sequential(const RenderRequest& r);

// Splits rows across `workers` threads (the caller counts as one).
// Produces a grid identical to render_sequential for every request.
IterationGrid render_parallel(const RenderRequest& r, int workers);

// 64-bit FNV-1a over the little-endian uint32 serialization
//   width, height, max_iter, counts[0], counts[1], ...   (row-major)
std::uint64_t grid_hash(const IterationGrid& g);

// Lowercase, zero-padded, 16 hex characters.
std::string hash_hex(std::uint64_t digest);

}  // namespace fractal
