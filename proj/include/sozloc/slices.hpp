#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sozloc/image.hpp"

namespace sozloc {

struct SlicesConfig {
    std::optional<std::pair<int, int>> layout;  // (rows, cols) grid hint
    double bg_threshold = 25.0;       // auto-segmentation foreground luminance
    double activation_delta = 40.0;   // R-dominance margin on the 0..255 scale
    double dbscan_eps = 2.0;
    int dbscan_vmin = 4;
    int cluster_px_threshold = 135;   // clusters below this size are not counted
    bool basal_last = true;           // inferior slices at the end of the montage
};

struct BrainSlice {
    int index = 0;                    // montage order, row-major
    Image pixels;
    GrayImage gray;
    std::pair<int, int> origin{0, 0};  // (row, col) offset in the montage
};

struct PixelMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> bits;
    long count = 0;

    PixelMask() = default;
    PixelMask(int h, int w) : height(h), width(w), bits(static_cast<std::size_t>(h) * w, 0) {}

    bool test(int r, int c) const { return bits[static_cast<std::size_t>(r) * width + c] != 0; }
    void set(int r, int c) {
        auto& b = bits[static_cast<std::size_t>(r) * width + c];
        if (!b) {
            b = 1;
            ++count;
        }
    }
    void clear(int r, int c) {
        auto& b = bits[static_cast<std::size_t>(r) * width + c];
        if (b) {
            b = 0;
            --count;
        }
    }
    bool empty() const { return count == 0; }
};

struct Point {
    int r = 0;
    int c = 0;
    bool operator==(const Point&) const = default;
    auto operator<=>(const Point&) const = default;
};

struct Contour {
    std::vector<Point> chain;  // 8-connected, closed (last adjacent to first)
    long length = 0;
    double enclosed_area = 0.0;  // shoelace area of the chain polygon
};

struct Cluster {
    PixelMask members;
    long size = 0;
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    int slice_index = 0;
};

// Grid tiling when a layout hint is present; otherwise background-threshold
// segmentation into connected foreground boxes ordered row-major.
std::vector<BrainSlice> extract_slices(const Image& montage, const SlicesConfig& cfg);

// Pixels where the activation colormap dominates: R > G+delta and R > B+delta.
PixelMask activation_mask(const BrainSlice& slice, const SlicesConfig& cfg);

// Activation pixels replaced by the median luminance of their non-activation
// 11x11 neighborhood; everything else untouched.
GrayImage suppress_activation(const BrainSlice& slice, const SlicesConfig& cfg);

// Sobel magnitude -> Otsu threshold over nonzero magnitudes -> 3x3 closing ->
// border following. Sorted by enclosed area, largest first.
std::vector<Contour> detect_contours(const GrayImage& gray);

// Interior-cavity proxy: convex hull of all contour points minus the 3 px
// dilated contour bands and minus every region a contour chain encloses.
// Empty unless the slice is basal.
PixelMask ventricle_region(const BrainSlice& slice, const std::vector<Contour>& contours, bool basal);

// DBSCAN over set pixels. Core test uses the eps-neighborhood cardinality
// including the point itself (>= v_min), so v_min=1 reduces to connected
// components. Border points join their nearest core's cluster; noise dropped.
// Sorted by size, largest first.
std::vector<Cluster> cluster_activations(const PixelMask& mask, double eps = 2.0, int v_min = 4,
                                         int slice_index = 0);

// True for slices in the basal band: the last (or first, if basal_last is
// false) ceil(n/3) montage indices.
bool is_basal(int slice_index, int slice_count, bool basal_last);

}  // namespace sozloc
