#pragma once

#include <cmath>

namespace fractal {

// A point in the complex plane. Houses Z, Z0 and C alike.
struct ComplexValue {
    double re = 0.0;
    double im = 0.0;

    constexpr ComplexValue() = default;
    constexpr ComplexValue(double r, double i = 0.0) : re(r), im(i) {}

    constexpr double norm_sq() const { return re * re + im * im; }
    bool is_finite() const { return std::isfinite(re) && std::isfinite(im); }

    friend constexpr ComplexValue operator+(ComplexValue a, ComplexValue b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr ComplexValue operator-(ComplexValue a, ComplexValue b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr ComplexValue operator-(ComplexValue a) { return {-a.re, -a.im}; }
    friend constexpr ComplexValue operator*(ComplexValue a, ComplexValue b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend constexpr ComplexValue operator*(ComplexValue a, double s) { return {a.re * s, a.im * s}; }
    friend constexpr ComplexValue operator*(double s, ComplexValue a) { return {a.re * s, a.im * s}; }
    friend constexpr ComplexValue operator/(ComplexValue a, double s) { return {a.re / s, a.im / s}; }

    friend constexpr bool operator==(ComplexValue, ComplexValue) = default;
};

}  // namespace fractal
