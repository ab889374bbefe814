#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sozloc/phantom.hpp"
#include "sozloc/slices.hpp"

namespace test_util {

// unique scratch directory under the build tree, removed on destruction
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("sozloc_test_" + tag + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

// 8-connected components oracle, independent of the DBSCAN implementation
inline std::vector<std::vector<sozloc::Point>> connected_components8(const sozloc::PixelMask& mask) {
    std::vector<std::vector<sozloc::Point>> comps;
    std::vector<char> seen(static_cast<std::size_t>(mask.height) * mask.width, 0);
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.test(r, c) || seen[static_cast<std::size_t>(r) * mask.width + c]) continue;
            std::vector<sozloc::Point> comp;
            std::vector<sozloc::Point> stack{{r, c}};
            seen[static_cast<std::size_t>(r) * mask.width + c] = 1;
            while (!stack.empty()) {
                const sozloc::Point p = stack.back();
                stack.pop_back();
                comp.push_back(p);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = p.r + dr, nc = p.c + dc;
                        if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
                        auto& s = seen[static_cast<std::size_t>(nr) * mask.width + nc];
                        if (s || !mask.test(nr, nc)) continue;
                        s = 1;
                        stack.push_back({nr, nc});
                    }
                }
            }
            comps.push_back(std::move(comp));
        }
    }
    return comps;
}

// even-odd point-in-polygon over a pixel chain, used to probe what a contour
// encloses without touching the implementation's fill
inline bool inside_chain(const std::vector<sozloc::Point>& chain, double r, double c) {
    bool inside = false;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& a = chain[i];
        const auto& b = chain[(i + 1) % chain.size()];
        if ((a.r <= r && r < b.r) || (b.r <= r && r < a.r)) {
            const double t = (r - a.r) / static_cast<double>(b.r - a.r);
            if (a.c + t * (b.c - a.c) > c) inside = !inside;
        }
    }
    return inside;
}

// single-slice phantom montage helper: spec with a 1x1 montage grid
inline sozloc::PhantomSpec single_slice_spec(int slice = 96) {
    sozloc::PhantomSpec spec;
    spec.montage_rows = 1;
    spec.montage_cols = 3;  // >= 3 slices required; basal band = last slice
    spec.slice_h = slice;
    spec.slice_w = slice;
    spec.n_patients = 1;
    spec.ics_per_patient = 3;
    return spec;
}

}  // namespace test_util
