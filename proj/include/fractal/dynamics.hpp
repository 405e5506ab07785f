#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fractal/complex.hpp"

namespace fractal {

enum class FractalFunction {
    QuadraticJulia,        // z^2 + c
    QuarticJulia,          // z^4 + c
    QuarticRationalJulia,  // z^4 + (z^2 + 1)/(z^2 - 1) + c
};

std::string_view function_name(FractalFunction f);
// Accepts the names returned by function_name(). Throws std::invalid_argument otherwise.
FractalFunction parse_function(std::string_view name);
std::vector<FractalFunction> all_functions();

inline constexpr int kDefaultMaxIter = 100;
inline constexpr double kDefaultBailoutSq = 4.0;
// |z^2 - 1| below this is treated as a pole of the rational map.
inline constexpr double kPoleEpsilon = 1e-300;

struct EscapeParams {
    FractalFunction function = FractalFunction::QuadraticJulia;
    ComplexValue c{};
    int max_iter = kDefaultMaxIter;
    double bailout_radius_sq = kDefaultBailoutSq;

    // Throws std::invalid_argument unless max_iter >= 1, bailout_radius_sq >= 4 and c is finite.
    void validate() const;
};

// One application of the iteration map. Returns nullopt when the rational map
// hits a pole; callers treat that as an immediate escape.
std::optional<ComplexValue> iterate_step(ComplexValue z, ComplexValue c, FractalFunction f);

// Smallest n with |Z_n|^2 > bailout_radius_sq, where Z_0 = z0 and
// Z_{k+1} = f(Z_k, C); max_iter when no n <= max_iter - 1 qualifies.
// A starting point already outside the bailout radius returns 0.
int escape_time(ComplexValue z0, const EscapeParams& p);

}  // namespace fractal
