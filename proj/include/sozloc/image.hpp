#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sozloc {

// 8-bit RGB raster, row-major, interleaved channels.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data;  // height*width*3

    Image() = default;
    Image(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0) {}

    std::uint8_t& at(int r, int c, int ch) {
        return data[(static_cast<std::size_t>(r) * width + c) * 3 + ch];
    }
    std::uint8_t at(int r, int c, int ch) const {
        return data[(static_cast<std::size_t>(r) * width + c) * 3 + ch];
    }
    bool empty() const { return height == 0 || width == 0; }
    bool operator==(const Image& o) const = default;
};

// Double-precision single-channel raster.
struct GrayImage {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
};

// Rec. 601 luma on the 0..255 scale.
GrayImage luminance(const Image& img);

// Bilinear resample to exactly target_h x target_w. Identity when dims match.
Image resize_image(const Image& img, int target_h, int target_w);

// PNG I/O. Reads 8-bit gray/palette/RGB/RGBA as RGB; writes 8-bit RGB.
Image read_png(const std::string& path);
void write_png(const std::string& path, const Image& img);

}  // namespace sozloc
