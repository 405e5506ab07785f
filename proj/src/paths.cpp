#include "fractal/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fractal {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Accumulated -dt steps land within rounding of -2pi at the end of a
// revolution; this much slack makes that count as a wrap.
constexpr double kWrapSlack = 1e-9;
// Repeated da_per_rev subtraction can stop a rounding error short of a_floor.
constexpr double kFloorSnap = 1e-12;
}  // namespace

ComplexValue cardioid_point(double t, double a) {
    if (!(a > 0.0)) {
        throw std::domain_error("cardioid divisor must be positive");
    }
    return {(2.0 * std::cos(t) - std::cos(2.0 * t)) / a, (2.0 * std::sin(t) - std::sin(2.0 * t)) / a};
}

std::string_view path_kind_name(PathKind k) {
    switch (k) {
        case PathKind::Fixed: return "fixed";
        case PathKind::Cardioid: return "cardioid";
        case PathKind::LineSegment: return "line";
    }
    return "unknown";
}

PathKind parse_path_kind(std::string_view name) {
    for (PathKind k : {PathKind::Fixed, PathKind::Cardioid, PathKind::LineSegment}) {
        if (path_kind_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown path kind: " + std::string(name));
}

void PathState::validate() const {
    for (double x : {t, a, dt, da_per_rev, a_floor}) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("path fields must be finite");
        }
    }
    if (!fixed.is_finite() || !start.is_finite() || !end.is_finite()) {
        throw std::invalid_argument("path endpoints must be finite");
    }
    if (kind != PathKind::Fixed && dt < 0.0) {
        throw std::invalid_argument("dt must be non-negative");
    }
    if (kind == PathKind::Cardioid) {
        if (!(a_floor > 0.0)) {
            throw std::invalid_argument("a_floor must be positive");
        }
        if (a < a_floor) {
            throw std::invalid_argument("a must not be below a_floor");
        }
        if (da_per_rev < 0.0) {
            throw std::invalid_argument("da_per_rev must be non-negative");
        }
    }
}

PathState fixed_path(ComplexValue c) {
    PathState s;
    s.kind = PathKind::Fixed;
    s.fixed = c;
    return s;
}

PathState cardioid_path(double a, double dt, double da_per_rev, double a_floor) {
    PathState s;
    s.kind = PathKind::Cardioid;
    s.a = a;
    s.dt = dt;
    s.da_per_rev = da_per_rev;
    s.a_floor = a_floor;
    return s;
}

PathState line_path(ComplexValue start, ComplexValue end, double dt) {
    PathState s;
    s.kind = PathKind::LineSegment;
    s.start = start;
    s.end = end;
    s.dt = dt;
    return s;
}

PathState step(const PathState& s) {
    PathState out = s;
    switch (s.kind) {
        case PathKind::Fixed:
            break;
        case PathKind::Cardioid:
            out.t = s.t - s.dt;
            while (out.t <= -kTwoPi + kWrapSlack) {
                out.t = std::min(out.t + kTwoPi, 0.0);
                out.a = out.a - s.da_per_rev < s.a_floor + kFloorSnap ? s.a_floor : out.a - s.da_per_rev;
            }
            break;
        case PathKind::LineSegment:
            out.t = std::clamp(s.t + s.dt, 0.0, 1.0);
            break;
    }
    return out;
}

PathState step(const PathState& s, long long n) {
    PathState out = s;
    for (long long i = 0; i < n; ++i) {
        out = step(out);
    }
    return out;
}

ComplexValue current_c(const PathState& s) {
    switch (s.kind) {
        case PathKind::Fixed:
            return s.fixed;
        case PathKind::Cardioid:
            return cardioid_point(s.t, s.a);
        case PathKind::LineSegment:
            return s.start + (s.end - s.start) * s.t;
    }
    return s.fixed;
}

}  // namespace fractal
