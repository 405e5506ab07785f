#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fractal/render.hpp"

namespace fractal {

enum class BenchMethod { Sequential, Parallel };

std::string_view bench_method_name(BenchMethod m);

struct BenchConfig {
    std::vector<int> sizes{10, 32, 100, 316, 1000, 2048};
    int repetitions = 5;
    int workers = 1;
    // Viewport dimensions are replaced by each size; the rest is kept.
    RenderRequest request{};
    // Sizes whose grid would need more bytes than this are skipped.
    std::uint64_t memory_budget_bytes = std::uint64_t{4} << 30;

    void validate() const;
};

// Julia request at the first Figure-2-style parameter on the cardioid, default
// viewport, 100 iterations.
RenderRequest default_bench_request();

struct BenchRecord {
    int size = 0;
    BenchMethod method = BenchMethod::Sequential;
    int workers = 1;
    double median_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
    bool skipped = false;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct TimingSummary {
    double median_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
};

// Median of an even count is the mean of the two middle samples.
TimingSummary summarize(std::span<const double> samples_ms);

// One untimed warmup render per (size, method), then `repetitions` timed
// renders. Only the render call is timed. Records are sorted by
// (size, method) with sequential first.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

// Header "size,method,workers,median_ms,min_ms,max_ms", one LF-terminated row
// per record. Skipped records leave the three timing fields empty.
void write_csv(const std::vector<BenchRecord>& records, std::ostream& out);
void write_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& destination);

}  // namespace fractal
