#pragma once

#include <iosfwd>

namespace fractal {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the `fractal` tool: julia | mandelbrot | animate | bench | serve.
// Returns 0 on success, 1 on runtime failure, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fractal
