#include "fractal/dynamics.hpp"

#include <stdexcept>

namespace fractal {

namespace {

struct Quadratic {
    static bool apply(ComplexValue& z, ComplexValue c) {
        const double re2 = z.re * z.re;
        const double im2 = z.im * z.im;
        z = {re2 - im2 + c.re, 2.0 * z.re * z.im + c.im};
        return true;
    }
};

struct Quartic {
    static bool apply(ComplexValue& z, ComplexValue c) {
        const ComplexValue z2 = z * z;
        z = z2 * z2 + c;
        return true;
    }
};

struct QuarticRational {
    static bool apply(ComplexValue& z, ComplexValue c) {
        const ComplexValue z2 = z * z;
        const ComplexValue den = z2 - ComplexValue{1.0, 0.0};
        const double den_sq = den.norm_sq();
        // den_sq underflows to zero long before |den| reaches the pole threshold
        if (std::hypot(den.re, den.im) < kPoleEpsilon || den_sq == 0.0) {
            return false;
        }
        const ComplexValue num = z2 + ComplexValue{1.0, 0.0};
        // num * conj(den) / |den|^2
        const ComplexValue quotient{(num.re * den.re + num.im * den.im) / den_sq,
                                    (num.im * den.re - num.re * den.im) / den_sq};
        z = z2 * z2 + quotient + c;
        return true;
    }
};

template <typename Map>
int escape_loop(ComplexValue z, ComplexValue c, int max_iter, double bailout_sq) {
    for (int n = 0; n < max_iter; ++n) {
        if (n > 0 && !Map::apply(z, c)) {
            return n;
        }
        // Negated so that a NaN magnitude (inf - inf after overflow) also escapes.
        if (!(z.norm_sq() <= bailout_sq)) {
            return n;
        }
    }
    return max_iter;
}

}  // namespace

std::string_view function_name(FractalFunction f) {
    switch (f) {
        case FractalFunction::QuadraticJulia: return "quadratic";
        case FractalFunction::QuarticJulia: return "quartic";
        case FractalFunction::QuarticRationalJulia: return "quartic_rational";
    }
    return "unknown";
}

FractalFunction parse_function(std::string_view name) {
    for (FractalFunction f : all_functions()) {
        if (function_name(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown fractal function: " + std::string(name));
}

std::vector<FractalFunction> all_functions() {
    return {FractalFunction::QuadraticJulia, FractalFunction::QuarticJulia,
            FractalFunction::QuarticRationalJulia};
}

void EscapeParams::validate() const {
    if (max_iter < 1) {
        throw std::invalid_argument("max_iter must be >= 1");
    }
    if (!(bailout_radius_sq >= 4.0) || !std::isfinite(bailout_radius_sq)) {
        throw std::invalid_argument("bailout_radius_sq must be a finite value >= 4");
    }
    if (!c.is_finite()) {
        throw std::invalid_argument("parameter c must be finite");
    }
}

std::optional<ComplexValue> iterate_step(ComplexValue z, ComplexValue c, FractalFunction f) {
    bool ok = true;
    switch (f) {
        case FractalFunction::QuadraticJulia: ok = Quadratic::apply(z, c); break;
        case FractalFunction::QuarticJulia: ok = Quartic::apply(z, c); break;
        case FractalFunction::QuarticRationalJulia: ok = QuarticRational::apply(z, c); break;
    }
    if (!ok) {
        return std::nullopt;
    }
    return z;
}

int escape_time(ComplexValue z0, const EscapeParams& p) {
    switch (p.function) {
        case FractalFunction::QuadraticJulia:
            return escape_loop<Quadratic>(z0, p.c, p.max_iter, p.bailout_radius_sq);
        case FractalFunction::QuarticJulia:
            return escape_loop<Quartic>(z0, p.c, p.max_iter, p.bailout_radius_sq);
        case FractalFunction::QuarticRationalJulia:
            return escape_loop<QuarticRational>(z0, p.c, p.max_iter, p.bailout_radius_sq);
    }
    return p.max_iter;
}

}  // namespace fractal
