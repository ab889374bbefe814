#include "sozloc/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "sozloc/errors.hpp"

namespace sozloc {

GrayImage luminance(const Image& img) {
    GrayImage out(img.height, img.width);
    const std::uint8_t* p = img.data.data();
    for (std::size_t i = 0; i < out.data.size(); ++i, p += 3) {
        out.data[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return out;
}

Image resize_image(const Image& img, int target_h, int target_w) {
    if (target_h <= 0 || target_w <= 0) {
        throw ArgumentError("resize_image: target dimensions must be positive");
    }
    if (img.empty()) {
        throw ArgumentError("resize_image: empty input image");
    }
    if (target_h == img.height && target_w == img.width) {
        return img;
    }
    Image out(target_h, target_w);
    const double sr = static_cast<double>(img.height) / target_h;
    const double sc = static_cast<double>(img.width) / target_w;
    for (int r = 0; r < target_h; ++r) {
        double src_r = (r + 0.5) * sr - 0.5;
        src_r = std::clamp(src_r, 0.0, static_cast<double>(img.height - 1));
        const int r0 = static_cast<int>(src_r);
        const int r1 = std::min(r0 + 1, img.height - 1);
        const double fr = src_r - r0;
        for (int c = 0; c < target_w; ++c) {
            double src_c = (c + 0.5) * sc - 0.5;
            src_c = std::clamp(src_c, 0.0, static_cast<double>(img.width - 1));
            const int c0 = static_cast<int>(src_c);
            const int c1 = std::min(c0 + 1, img.width - 1);
            const double fc = src_c - c0;
            for (int ch = 0; ch < 3; ++ch) {
                const double v = (1 - fr) * ((1 - fc) * img.at(r0, c0, ch) + fc * img.at(r0, c1, ch)) +
                                 fr * ((1 - fc) * img.at(r1, c0, ch) + fc * img.at(r1, c1, ch));
                out.at(r, c, ch) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) {
        throw DataError("cannot open image file: " + path);
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("not a valid PNG file: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    Image img(static_cast<int>(h), static_cast<int>(w));
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r) {
        rows[r] = img.data.data() + static_cast<std::size_t>(r) * w * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const std::string& path, const Image& img) {
    if (img.empty()) {
        throw ArgumentError("write_png: empty image");
    }
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) {
        throw DataError("cannot open image file for writing: " + path);
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("PNG write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int r = 0; r < img.height; ++r) {
        rows[r] = const_cast<png_bytep>(img.data.data()) + static_cast<std::size_t>(r) * img.width * 3;
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace sozloc
