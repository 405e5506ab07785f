#pragma once

#include <numbers>
#include <string_view>

#include "fractal/complex.hpp"

namespace fractal {

// Divisor at which the cardioid curve runs just outside the main cardioid.
inline constexpr double kNearBoundaryDivisor = 3.9;
inline constexpr double kDefaultPathDt = 2.0 * std::numbers::pi / 600.0;
inline constexpr double kDefaultDaPerRev = 0.05;
inline constexpr double kDefaultAFloor = 3.5;

// ((2 cos t - cos 2t) / a, (2 sin t - sin 2t) / a). With a = 4 this traces the
// boundary of the main cardioid of the Mandelbrot set; larger a pulls the
// curve inward, smaller a pushes it outward.
// Throws std::domain_error unless a > 0.
ComplexValue cardioid_point(double t, double a);

enum class PathKind { Fixed, Cardioid, LineSegment };

std::string_view path_kind_name(PathKind k);
// Throws std::invalid_argument for unknown names.
PathKind parse_path_kind(std::string_view name);

// Drives C over time.
//   Cardioid:    t is the curve angle in radians, stepped by -dt (clockwise on
//                screen); each completed revolution lowers a by da_per_rev,
//                never below a_floor.
//   LineSegment: t is the fraction in [0, 1] along start -> end, stepped by +dt
//                and clamped at 1.
//   Fixed:       C stays at `fixed`.
struct PathState {
    PathKind kind = PathKind::Fixed;
    double t = 0.0;
    double a = kNearBoundaryDivisor;
    double dt = kDefaultPathDt;
    double da_per_rev = kDefaultDaPerRev;
    double a_floor = kDefaultAFloor;
    ComplexValue fixed{};
    ComplexValue start{};
    ComplexValue end{};

    // Throws std::invalid_argument on non-finite fields or, for Cardioid,
    // unless a >= a_floor > 0 and da_per_rev >= 0.
    void validate() const;

    friend bool operator==(const PathState&, const PathState&) = default;
};

PathState fixed_path(ComplexValue c);
PathState cardioid_path(double a = kNearBoundaryDivisor, double dt = kDefaultPathDt,
                        double da_per_rev = kDefaultDaPerRev, double a_floor = kDefaultAFloor);
PathState line_path(ComplexValue start, ComplexValue end, double dt);

PathState step(const PathState& s);
PathState step(const PathState& s, long long n);

ComplexValue current_c(const PathState& s);

}  // namespace fractal
