#include "fractal/viewport.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fractal {

void Viewport::validate() const {
    if (!(span_re > 0.0) || !std::isfinite(span_re)) {
        throw std::invalid_argument("viewport span must be finite and positive");
    }
    if (width_px < 1 || height_px < 1) {
        throw std::invalid_argument("viewport dimensions must be at least 1x1");
    }
    if (!center.is_finite()) {
        throw std::invalid_argument("viewport center must be finite");
    }
}

Viewport default_julia_viewport(int width_px, int height_px) {
    return Viewport{{0.0, 0.0}, 4.0, width_px, height_px};
}

Viewport default_mandelbrot_viewport(int width_px, int height_px) {
    return Viewport{{-0.5, 0.0}, 3.0, width_px, height_px};
}

ComplexValue pixel_to_complex(const Viewport& v, int px, int py) {
    if (px < 0 || px >= v.width_px || py < 0 || py >= v.height_px) {
        throw std::out_of_range("pixel (" + std::to_string(px) + ", " + std::to_string(py) +
                                ") outside " + std::to_string(v.width_px) + "x" +
                                std::to_string(v.height_px) + " viewport");
    }
    const double fx = (px + 0.5) / v.width_px - 0.5;
    const double fy = (py + 0.5) / v.height_px - 0.5;
    return {v.center.re + fx * v.span_re, v.center.im - fy * v.span_im()};
}

PixelPosition complex_to_pixel(const Viewport& v, ComplexValue z) {
    const double fx = (z.re - v.center.re) / v.span_re + 0.5;
    const double fy = 0.5 - (z.im - v.center.im) / v.span_im();
    return {fx * v.width_px - 0.5, fy * v.height_px - 0.5};
}

ZoomResult zoom(const Viewport& v, ComplexValue anchor, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("zoom factor must be finite and positive");
    }
    if (!anchor.is_finite()) {
        throw std::invalid_argument("zoom anchor must be finite");
    }
    Viewport out = v;
    out.span_re = v.span_re / factor;
    out.center = anchor + (v.center - anchor) / factor;
    return {out, out.below_precision_floor()};
}

Viewport pan(const Viewport& v, double d_px, double d_py) {
    Viewport out = v;
    out.center.re += d_px / v.width_px * v.span_re;
    out.center.im -= d_py / v.height_px * v.span_im();
    return out;
}

}  // namespace fractal
