#include "fractal/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

namespace fractal {

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
    const std::string header =
        "P6\n" + std::to_string(img.width_px) + " " + std::to_string(img.height_px) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + img.pixels.size() * 3);
    for (const Rgb& px : img.pixels) {
        out.push_back(px.r);
        out.push_back(px.g);
        out.push_back(px.b);
    }
    return out;
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) {
        throw std::runtime_error("png_create_write_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    // Row data is staged before setjmp so no C++ object is constructed after it.
    std::vector<std::uint8_t> rgb(img.pixels.size() * 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        rgb[3 * i] = img.pixels[i].r;
        rgb[3 * i + 1] = img.pixels[i].g;
        rgb[3 * i + 2] = img.pixels[i].b;
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height_px));
    for (int y = 0; y < img.height_px; ++y) {
        rows[static_cast<std::size_t>(y)] = rgb.data() + static_cast<std::size_t>(y) * img.width_px * 3;
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_append, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width_px),
                 static_cast<png_uint_32>(img.height_px), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

ImageFormat format_for_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".ppm") {
        return ImageFormat::Ppm;
    }
    if (ext == ".png") {
        return ImageFormat::Png;
    }
    throw std::invalid_argument("output must end in .ppm or .png: " + path.string());
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void write_image(const std::filesystem::path& path, const RgbImage& img) {
    const ImageFormat fmt = format_for_path(path);
    write_file(path, fmt == ImageFormat::Ppm ? encode_ppm(img) : encode_png(img));
}

}  // namespace fractal
