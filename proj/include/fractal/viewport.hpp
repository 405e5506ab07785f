#pragma once

#include "fractal/complex.hpp"

namespace fractal {

// Spans below this are past what 64-bit arithmetic can resolve per pixel.
inline constexpr double kPrecisionFloorSpan = 1e-13;

// Region of the plane covered by an image. Pixels are always square, so the
// imaginary span follows from the real span and the aspect ratio.
struct Viewport {
    ComplexValue center{};
    double span_re = 4.0;
    int width_px = 1;
    int height_px = 1;

    double span_im() const { return span_re * height_px / width_px; }
    bool below_precision_floor() const { return span_re < kPrecisionFloorSpan; }

    // Throws std::invalid_argument on non-positive span or dimensions, or a non-finite center.
    void validate() const;

    friend bool operator==(const Viewport&, const Viewport&) = default;
};

struct PixelPosition {
    double px = 0.0;
    double py = 0.0;
};

Viewport default_julia_viewport(int width_px, int height_px);
Viewport default_mandelbrot_viewport(int width_px, int height_px);

// Plane coordinate of the pixel center. Row 0 is the top of the image and the
// imaginary axis points up. Throws std::out_of_range for pixels off the grid.
ComplexValue pixel_to_complex(const Viewport& v, int px, int py);

// Inverse of pixel_to_complex. Points outside the viewport map to
// off-grid fractional coordinates.
PixelPosition complex_to_pixel(const Viewport& v, ComplexValue z);

struct ZoomResult {
    Viewport viewport;
    bool precision_warning = false;
};

// Divides the span by `factor` while keeping `anchor` at the same fractional
// pixel position. Throws std::invalid_argument unless factor is finite and > 0.
ZoomResult zoom(const Viewport& v, ComplexValue anchor, double factor);

// Shifts the view by a pixel delta; +d_px moves right, +d_py moves down.
Viewport pan(const Viewport& v, double d_px, double d_py);

}  // namespace fractal
