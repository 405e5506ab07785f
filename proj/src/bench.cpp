#include "fractal/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fractal {

std::string_view bench_method_name(BenchMethod m) {
    return m == BenchMethod::Sequential ? "sequential" : "parallel";
}

void BenchConfig::validate() const {
    if (sizes.empty()) {
        throw std::invalid_argument("bench needs at least one size");
    }
    for (int s : sizes) {
        if (s < 1) {
            throw std::invalid_argument("bench sizes must be >= 1");
        }
    }
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be >= 1");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
}

RenderRequest default_bench_request() {
    RenderRequest r;
    r.set_kind = SetKind::Julia;
    r.params.c = {0.320564, -0.0391827};
    r.params.max_iter = kDefaultMaxIter;
    r.viewport = default_julia_viewport(1, 1);
    return r;
}

TimingSummary summarize(std::span<const double> samples_ms) {
    if (samples_ms.empty()) {
        throw std::invalid_argument("no samples to summarize");
    }
    std::vector<double> sorted(samples_ms.begin(), samples_ms.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return {median, sorted.front(), sorted.back()};
}

namespace {

double time_render_ms(const RenderRequest& r, BenchMethod method, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    IterationGrid g = method == BenchMethod::Sequential ? render_sequential(r) : render_parallel(r, workers);
    const auto t1 = std::chrono::steady_clock::now();
    // Keep the result observable so the render cannot be discarded.
    if (g.counts.size() != static_cast<std::size_t>(g.width_px) * g.height_px) {
        throw std::logic_error("grid size mismatch");
    }
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<BenchRecord> records;
    for (int size : cfg.sizes) {
        RenderRequest r = cfg.request;
        r.viewport.width_px = size;
        r.viewport.height_px = size;
        const std::uint64_t bytes =
            static_cast<std::uint64_t>(size) * static_cast<std::uint64_t>(size) * sizeof(std::int32_t);
        const bool too_big = bytes > cfg.memory_budget_bytes ||
                             static_cast<std::uint64_t>(size) * static_cast<std::uint64_t>(size) > kMaxGridCells;

        for (BenchMethod method : {BenchMethod::Sequential, BenchMethod::Parallel}) {
            BenchRecord rec;
            rec.size = size;
            rec.method = method;
            rec.workers = method == BenchMethod::Sequential ? 1 : cfg.workers;
            if (too_big) {
                rec.skipped = true;
                records.push_back(rec);
                continue;
            }
            time_render_ms(r, method, cfg.workers);
            std::vector<double> samples;
            samples.reserve(static_cast<std::size_t>(cfg.repetitions));
            for (int i = 0; i < cfg.repetitions; ++i) {
                samples.push_back(time_render_ms(r, method, cfg.workers));
            }
            const TimingSummary s = summarize(samples);
            rec.median_ms = s.median_ms;
            rec.min_ms = s.min_ms;
            rec.max_ms = s.max_ms;
            records.push_back(rec);
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        if (a.size != b.size) {
            return a.size < b.size;
        }
        return a.method < b.method;
    });
    return records;
}

namespace {

// Shortest fixed-notation text that parses back to the same double.
std::string format_ms(double ms) {
    char buf[400];
    const auto res = std::to_chars(buf, buf + sizeof buf, ms, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
    out << "size,method,workers,median_ms,min_ms,max_ms\n";
    for (const BenchRecord& r : records) {
        out << r.size << ',' << bench_method_name(r.method) << ',' << r.workers << ',';
        if (!r.skipped) {
            out << format_ms(r.median_ms) << ',' << format_ms(r.min_ms) << ',' << format_ms(r.max_ms);
        } else {
            out << ",,";
        }
        out << '\n';
    }
}

void write_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + destination.string() + " for writing");
    }
    write_csv(records, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + destination.string());
    }
}

}  // namespace fractal
