#include "fractal/render.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <new>
#include <thread>

namespace fractal {

namespace {

IterationGrid allocate_grid(const RenderRequest& r) {
    const auto cells = static_cast<std::uint64_t>(r.viewport.width_px) *
                       static_cast<std::uint64_t>(r.viewport.height_px);
    if (cells > kMaxGridCells) {
        throw ResourceError("grid of " + std::to_string(cells) + " cells exceeds the " +
                            std::to_string(kMaxGridCells) + " cell limit");
    }
    IterationGrid g;
    g.width_px = r.viewport.width_px;
    g.height_px = r.viewport.height_px;
    g.max_iter = r.params.max_iter;
    try {
        g.counts.resize(static_cast<std::size_t>(cells));
    } catch (const std::bad_alloc&) {
        throw ResourceError("cannot allocate grid of " + std::to_string(cells) + " cells");
    }
    return g;
}

// Both renderers go through this, so each pixel sees the same arithmetic.
void render_row(const RenderRequest& r, int py, std::int32_t* row) {
    const Viewport& v = r.viewport;
    if (r.set_kind == SetKind::Julia) {
        for (int px = 0; px < v.width_px; ++px) {
            row[px] = escape_time(pixel_to_complex(v, px, py), r.params);
        }
    } else {
        EscapeParams p = r.params;
        for (int px = 0; px < v.width_px; ++px) {
            p.c = pixel_to_complex(v, px, py);
            row[px] = escape_time(ComplexValue{0.0, 0.0}, p);
        }
    }
}

}  // namespace

std::string_view set_kind_name(SetKind k) {
    return k == SetKind::Julia ? "julia" : "mandelbrot";
}

void RenderRequest::validate() const {
    viewport.validate();
    if (set_kind == SetKind::Mandelbrot) {
        EscapeParams p = params;
        p.c = {};
        p.validate();
    } else {
        params.validate();
    }
}

IterationGrid render_sequential(const RenderRequest& r) {
    r.validate();
    IterationGrid g = allocate_grid(r);
    for (int py = 0; py < g.height_px; ++py) {
        render_row(r, py, g.counts.data() + static_cast<std::size_t>(py) * g.width_px);
    }
    return g;
}

IterationGrid render_parallel(const RenderRequest& r, int workers) {
    if (workers < 1) {
        throw std::invalid_argument("worker count must be >= 1");
    }
    r.validate();
    IterationGrid g = allocate_grid(r);

    // Rows are handed out one at a time; every cell has exactly one writer.
    std::atomic<int> next_row{0};
    auto drain = [&] {
        for (int py = next_row.fetch_add(1, std::memory_order_relaxed); py < g.height_px;
             py = next_row.fetch_add(1, std::memory_order_relaxed)) {
            render_row(r, py, g.counts.data() + static_cast<std::size_t>(py) * g.width_px);
        }
    };

    const int helpers = std::min(workers, g.height_px) - 1;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(std::max(helpers, 0)));
        for (int i = 0; i < helpers; ++i) {
            pool.emplace_back(drain);
        }
        drain();
    }
    return g;
}

std::uint64_t grid_hash(const IterationGrid& g) {
    constexpr std::uint64_t kOffset = 14695981039346656037ULL;
    constexpr std::uint64_t kPrime = 1099511628211ULL;
    std::uint64_t h = kOffset;
    auto feed = [&h](std::uint32_t word) {
        for (int b = 0; b < 4; ++b) {
            h ^= (word >> (8 * b)) & 0xFFu;
            h *= kPrime;
        }
    };
    feed(static_cast<std::uint32_t>(g.width_px));
    feed(static_cast<std::uint32_t>(g.height_px));
    feed(static_cast<std::uint32_t>(g.max_iter));
    for (std::int32_t c : g.counts) {
        feed(static_cast<std::uint32_t>(c));
    }
    return h;
}

std::string hash_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

}  // namespace fractal
