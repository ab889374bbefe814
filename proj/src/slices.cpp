#include "sozloc/slices.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "sozloc/errors.hpp"

namespace sozloc {

namespace {

BrainSlice make_slice(const Image& montage, int index, int r0, int c0, int r1, int c1) {
    BrainSlice s;
    s.index = index;
    s.origin = {r0, c0};
    s.pixels = Image(r1 - r0, c1 - c0);
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            for (int ch = 0; ch < 3; ++ch) {
                s.pixels.at(r - r0, c - c0, ch) = montage.at(r, c, ch);
            }
        }
    }
    s.gray = luminance(s.pixels);
    return s;
}

struct Box {
    int r0, c0, r1, c1;  // half-open
    long fg = 0;
    double center_row() const { return 0.5 * (r0 + r1); }
    double center_col() const { return 0.5 * (c0 + c1); }
};

std::vector<Box> foreground_boxes(const GrayImage& lum, double threshold) {
    const int h = lum.height, w = lum.width;
    std::vector<int> comp(static_cast<std::size_t>(h) * w, -1);
    std::vector<Box> boxes;
    std::deque<std::pair<int, int>> queue;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (lum.at(r, c) <= threshold || comp[static_cast<std::size_t>(r) * w + c] >= 0) continue;
            const int id = static_cast<int>(boxes.size());
            Box box{r, c, r + 1, c + 1, 0};
            comp[static_cast<std::size_t>(r) * w + c] = id;
            queue.push_back({r, c});
            while (!queue.empty()) {
                auto [pr, pc] = queue.front();
                queue.pop_front();
                box.fg++;
                box.r0 = std::min(box.r0, pr);
                box.c0 = std::min(box.c0, pc);
                box.r1 = std::max(box.r1, pr + 1);
                box.c1 = std::max(box.c1, pc + 1);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr, nc = pc + dc;
                        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                        auto& m = comp[static_cast<std::size_t>(nr) * w + nc];
                        if (m >= 0 || lum.at(nr, nc) <= threshold) continue;
                        m = id;
                        queue.push_back({nr, nc});
                    }
                }
            }
            boxes.push_back(box);
        }
    }
    return boxes;
}

}  // namespace

bool is_basal(int slice_index, int slice_count, bool basal_last) {
    const int band = (slice_count + 2) / 3;
    if (basal_last) return slice_index >= slice_count - band;
    return slice_index < band;
}

std::vector<BrainSlice> extract_slices(const Image& montage, const SlicesConfig& cfg) {
    if (montage.empty()) {
        throw ArgumentError("extract_slices: empty montage");
    }
    std::vector<BrainSlice> slices;
    if (cfg.layout) {
        const auto [rows, cols] = *cfg.layout;
        if (rows <= 0 || cols <= 0) {
            throw ArgumentError("extract_slices: layout must be positive");
        }
        int index = 0;
        for (int i = 0; i < rows; ++i) {
            const int r0 = static_cast<int>(std::lround(static_cast<double>(i) * montage.height / rows));
            const int r1 = static_cast<int>(std::lround(static_cast<double>(i + 1) * montage.height / rows));
            for (int j = 0; j < cols; ++j) {
                const int c0 = static_cast<int>(std::lround(static_cast<double>(j) * montage.width / cols));
                const int c1 = static_cast<int>(std::lround(static_cast<double>(j + 1) * montage.width / cols));
                slices.push_back(make_slice(montage, index++, r0, c0, r1, c1));
            }
        }
        return slices;
    }

    const GrayImage lum = luminance(montage);
    std::vector<Box> boxes = foreground_boxes(lum, cfg.bg_threshold);
    std::erase_if(boxes, [](const Box& b) {
        const double area = static_cast<double>(b.r1 - b.r0) * (b.c1 - b.c0);
        return b.fg <= 0.05 * area;
    });
    if (boxes.empty()) return slices;

    // row-major ordering: group boxes into rows, then sort by column
    std::sort(boxes.begin(), boxes.end(),
              [](const Box& a, const Box& b) { return a.center_row() < b.center_row(); });
    std::vector<double> heights;
    for (const auto& b : boxes) heights.push_back(b.r1 - b.r0);
    std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
    const double row_gap = 0.6 * heights[heights.size() / 2];
    std::vector<std::vector<Box>> bands;
    for (const auto& b : boxes) {
        if (bands.empty() || b.center_row() - bands.back().front().center_row() > row_gap) {
            bands.push_back({b});
        } else {
            bands.back().push_back(b);
        }
    }
    int index = 0;
    for (auto& band : bands) {
        std::sort(band.begin(), band.end(),
                  [](const Box& a, const Box& b) { return a.center_col() < b.center_col(); });
        for (const auto& b : band) {
            slices.push_back(make_slice(montage, index++, b.r0, b.c0, b.r1, b.c1));
        }
    }
    return slices;
}

PixelMask activation_mask(const BrainSlice& slice, const SlicesConfig& cfg) {
    const Image& img = slice.pixels;
    PixelMask mask(img.height, img.width);
    const double d = cfg.activation_delta;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const double red = img.at(r, c, 0);
            if (red > img.at(r, c, 1) + d && red > img.at(r, c, 2) + d) {
                mask.set(r, c);
            }
        }
    }
    return mask;
}

GrayImage suppress_activation(const BrainSlice& slice, const SlicesConfig& cfg) {
    const PixelMask mask = activation_mask(slice, cfg);
    GrayImage out = slice.gray;
    if (mask.empty()) return out;

    std::vector<double> window;
    window.reserve(121);
    std::vector<double> clean;
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            if (!mask.test(r, c)) clean.push_back(out.at(r, c));
        }
    }
    double global_median;
    if (clean.empty()) {
        // fully activated slice: fall back to the global median of everything
        clean = out.data;
    }
    std::nth_element(clean.begin(), clean.begin() + clean.size() / 2, clean.end());
    global_median = clean[clean.size() / 2];

    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            if (!mask.test(r, c)) continue;
            window.clear();
            for (int dr = -5; dr <= 5; ++dr) {
                for (int dc = -5; dc <= 5; ++dc) {
                    const int nr = r + dr, nc = c + dc;
                    if (nr < 0 || nr >= out.height || nc < 0 || nc >= out.width) continue;
                    if (!mask.test(nr, nc)) window.push_back(slice.gray.at(nr, nc));
                }
            }
            if (window.empty()) {
                out.at(r, c) = global_median;
            } else {
                std::nth_element(window.begin(), window.begin() + window.size() / 2, window.end());
                out.at(r, c) = window[window.size() / 2];
            }
        }
    }
    return out;
}

namespace {

GrayImage sobel_magnitude(const GrayImage& gray) {
    const int h = gray.height, w = gray.width;
    GrayImage mag(h, w);
    auto px = [&](int r, int c) {
        r = std::clamp(r, 0, h - 1);
        c = std::clamp(c, 0, w - 1);
        return gray.at(r, c);
    };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double gx = -px(r - 1, c - 1) - 2 * px(r, c - 1) - px(r + 1, c - 1) +
                              px(r - 1, c + 1) + 2 * px(r, c + 1) + px(r + 1, c + 1);
            const double gy = -px(r - 1, c - 1) - 2 * px(r - 1, c) - px(r - 1, c + 1) +
                              px(r + 1, c - 1) + 2 * px(r + 1, c) + px(r + 1, c + 1);
            mag.at(r, c) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return mag;
}

// Otsu over the nonzero values; returns a threshold in value units.
double otsu_nonzero(const GrayImage& mag) {
    double max_v = 0.0;
    for (double v : mag.data) max_v = std::max(max_v, v);
    if (max_v <= 0.0) return std::numeric_limits<double>::infinity();
    constexpr int kBins = 256;
    std::array<long, kBins> hist{};
    long total = 0;
    for (double v : mag.data) {
        if (v <= 0.0) continue;
        int b = static_cast<int>(v / max_v * (kBins - 1));
        hist[std::clamp(b, 0, kBins - 1)]++;
        ++total;
    }
    double sum_all = 0.0;
    for (int b = 0; b < kBins; ++b) sum_all += static_cast<double>(b) * hist[b];
    double best_between = -1.0;
    int best_bin = 0;
    long w0 = 0;
    double sum0 = 0.0;
    for (int b = 0; b < kBins; ++b) {
        w0 += hist[b];
        if (w0 == 0) continue;
        const long w1 = total - w0;
        if (w1 == 0) break;
        sum0 += static_cast<double>(b) * hist[b];
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = static_cast<double>(w0) * w1 * (m0 - m1) * (m0 - m1);
        if (between > best_between) {
            best_between = between;
            best_bin = b;
        }
    }
    return (best_bin + 0.5) / (kBins - 1) * max_v;
}

constexpr int kDirR[8] = {0, -1, -1, -1, 0, 1, 1, 1};   // W NW N NE E SE S SW (clockwise)
constexpr int kDirC[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

int direction_index(int dr, int dc) {
    for (int d = 0; d < 8; ++d) {
        if (kDirR[d] == dr && kDirC[d] == dc) return d;
    }
    return -1;
}

// Moore boundary trace of one 8-connected component, starting at its
// row-major-first pixel. Returns a closed chain.
std::vector<Point> moore_trace(const PixelMask& mask, Point start, long component_size) {
    auto fg = [&](int r, int c) {
        return r >= 0 && r < mask.height && c >= 0 && c < mask.width && mask.test(r, c);
    };
    std::vector<Point> chain{start};
    Point cur = start;
    int b_dir = 0;  // backtrack to the west: guaranteed background for the scan start
    const int b0 = b_dir;
    const long max_steps = 8 * component_size + 16;
    for (long step = 0; step < max_steps; ++step) {
        int found_dir = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (b_dir + k) % 8;
            if (fg(cur.r + kDirR[d], cur.c + kDirC[d])) {
                found_dir = d;
                // backtrack cell: the last background neighbor scanned before d
                const int prev = (b_dir + k - 1) % 8;
                const Point bg{cur.r + kDirR[prev], cur.c + kDirC[prev]};
                cur = {cur.r + kDirR[d], cur.c + kDirC[d]};
                b_dir = direction_index(bg.r - cur.r, bg.c - cur.c);
                break;
            }
        }
        if (found_dir < 0) break;                       // isolated pixel
        if (cur == start && b_dir == b0) break;         // Jacob's stopping criterion
        chain.push_back(cur);
    }
    return chain;
}

double shoelace(const std::vector<Point>& chain) {
    double acc = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const Point& a = chain[i];
        const Point& b = chain[(i + 1) % chain.size()];
        acc += static_cast<double>(a.c) * b.r - static_cast<double>(b.c) * a.r;
    }
    return std::abs(acc) * 0.5;
}

}  // namespace

std::vector<Contour> detect_contours(const GrayImage& gray) {
    const int h = gray.height, w = gray.width;
    const GrayImage mag = sobel_magnitude(gray);
    const double thr = otsu_nonzero(mag);
    if (!std::isfinite(thr)) return {};

    PixelMask edges(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (mag.at(r, c) > thr) edges.set(r, c);
        }
    }
    if (edges.empty()) return {};

    // 3x3 morphological closing
    PixelMask dilated(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!edges.test(r, c)) continue;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int nr = r + dr, nc = c + dc;
                    if (nr >= 0 && nr < h && nc >= 0 && nc < w) dilated.set(nr, nc);
                }
            }
        }
    }
    PixelMask closed(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            bool all = true;
            for (int dr = -1; dr <= 1 && all; ++dr) {
                for (int dc = -1; dc <= 1 && all; ++dc) {
                    const int nr = r + dr, nc = c + dc;
                    if (nr >= 0 && nr < h && nc >= 0 && nc < w && !dilated.test(nr, nc)) all = false;
                }
            }
            if (all) closed.set(r, c);
        }
    }
    if (closed.empty()) return {};

    // component labelling, then one border trace per component
    std::vector<int> comp(static_cast<std::size_t>(h) * w, -1);
    std::vector<Contour> contours;
    std::deque<Point> queue;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!closed.test(r, c) || comp[static_cast<std::size_t>(r) * w + c] >= 0) continue;
            const int id = static_cast<int>(contours.size());
            long size = 0;
            comp[static_cast<std::size_t>(r) * w + c] = id;
            queue.push_back({r, c});
            while (!queue.empty()) {
                const Point p = queue.front();
                queue.pop_front();
                ++size;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = p.r + dr, nc = p.c + dc;
                        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                        auto& m = comp[static_cast<std::size_t>(nr) * w + nc];
                        if (m >= 0 || !closed.test(nr, nc)) continue;
                        m = id;
                        queue.push_back({nr, nc});
                    }
                }
            }
            Contour contour;
            contour.chain = moore_trace(closed, {r, c}, size);
            contour.length = static_cast<long>(contour.chain.size());
            contour.enclosed_area = shoelace(contour.chain);
            contours.push_back(std::move(contour));
        }
    }
    std::stable_sort(contours.begin(), contours.end(),
                     [](const Contour& a, const Contour& b) { return a.enclosed_area > b.enclosed_area; });
    return contours;
}

namespace {

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return static_cast<long>(a.r - o.r) * (b.c - o.c) - static_cast<long>(a.c - o.c) * (b.r - o.r);
    };
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

// Even-odd rasterization of an arbitrary closed chain polygon, at pixel
// centers. Degenerate out-and-back chains enclose nothing.
void fill_polygon_even_odd(const std::vector<Point>& chain, PixelMask& out) {
    if (chain.size() < 3) return;
    int rmin = chain[0].r, rmax = chain[0].r;
    for (const auto& p : chain) {
        rmin = std::min(rmin, p.r);
        rmax = std::max(rmax, p.r);
    }
    std::vector<double> xs;
    for (int y = rmin; y <= rmax; ++y) {
        if (y < 0 || y >= out.height) continue;
        xs.clear();
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const Point& a = chain[i];
            const Point& b = chain[(i + 1) % chain.size()];
            if (a.r == b.r) continue;
            // half-open rule: count min(r) <= y < max(r)
            if ((a.r <= y && y < b.r) || (b.r <= y && y < a.r)) {
                const double t = static_cast<double>(y - a.r) / (b.r - a.r);
                xs.push_back(a.c + t * (b.c - a.c));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            const int c0 = std::max(0, static_cast<int>(std::ceil(xs[i] + 1e-9)));
            const int c1 = std::min(out.width - 1, static_cast<int>(std::floor(xs[i + 1] - 1e-9)));
            for (int c = c0; c <= c1; ++c) out.set(y, c);
        }
    }
}

}  // namespace

PixelMask ventricle_region(const BrainSlice& slice, const std::vector<Contour>& contours, bool basal) {
    PixelMask mask(slice.gray.height, slice.gray.width);
    if (!basal || contours.empty()) return mask;

    std::vector<Point> all_points;
    for (const auto& contour : contours) {
        all_points.insert(all_points.end(), contour.chain.begin(), contour.chain.end());
    }
    const std::vector<Point> hull = convex_hull(std::move(all_points));
    if (hull.size() < 3) return mask;

    // hull interior (inclusive of boundary)
    auto cross = [](const Point& a, const Point& b, int pr, int pc) {
        return static_cast<long>(b.r - a.r) * (pc - a.c) - static_cast<long>(b.c - a.c) * (pr - a.r);
    };
    int rmin = hull[0].r, rmax = hull[0].r, cmin = hull[0].c, cmax = hull[0].c;
    for (const auto& p : hull) {
        rmin = std::min(rmin, p.r);
        rmax = std::max(rmax, p.r);
        cmin = std::min(cmin, p.c);
        cmax = std::max(cmax, p.c);
    }
    for (int r = std::max(0, rmin); r <= std::min(mask.height - 1, rmax); ++r) {
        for (int c = std::max(0, cmin); c <= std::min(mask.width - 1, cmax); ++c) {
            bool inside = true;
            for (std::size_t i = 0; i < hull.size() && inside; ++i) {
                const Point& a = hull[i];
                const Point& b = hull[(i + 1) % hull.size()];
                if (cross(a, b, r, c) > 0) inside = false;
            }
            if (inside) mask.set(r, c);
        }
    }

    // subtract the dilated contour bands and every chain-enclosed region
    std::vector<std::pair<int, int>> disc;
    for (int dr = -3; dr <= 3; ++dr) {
        for (int dc = -3; dc <= 3; ++dc) {
            if (dr * dr + dc * dc <= 9) disc.push_back({dr, dc});
        }
    }
    PixelMask removal(mask.height, mask.width);
    for (const auto& contour : contours) {
        for (const auto& p : contour.chain) {
            for (const auto& [dr, dc] : disc) {
                const int nr = p.r + dr, nc = p.c + dc;
                if (nr >= 0 && nr < mask.height && nc >= 0 && nc < mask.width) removal.set(nr, nc);
            }
        }
        fill_polygon_even_odd(contour.chain, removal);
    }
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (mask.test(r, c) && removal.test(r, c)) mask.clear(r, c);
        }
    }
    return mask;
}

std::vector<Cluster> cluster_activations(const PixelMask& mask, double eps, int v_min, int slice_index) {
    if (!(eps > 0)) throw ArgumentError("cluster_activations: eps must be positive");
    if (v_min < 1) throw ArgumentError("cluster_activations: v_min must be at least 1");

    std::vector<Point> pts;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (mask.test(r, c)) pts.push_back({r, c});
        }
    }
    if (pts.empty()) return {};

    const int reach = static_cast<int>(std::floor(eps));
    const double eps2 = eps * eps;
    std::vector<std::vector<int>> index(static_cast<std::size_t>(mask.height) * mask.width);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        index[static_cast<std::size_t>(pts[i].r) * mask.width + pts[i].c].push_back(i);
    }
    auto neighbors_of = [&](int i) {
        std::vector<int> out;
        const Point& p = pts[i];
        for (int dr = -reach; dr <= reach; ++dr) {
            for (int dc = -reach; dc <= reach; ++dc) {
                if (dr * dr + dc * dc > eps2) continue;
                const int nr = p.r + dr, nc = p.c + dc;
                if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
                for (int j : index[static_cast<std::size_t>(nr) * mask.width + nc]) out.push_back(j);
            }
        }
        return out;  // includes i itself
    };

    const int n = static_cast<int>(pts.size());
    std::vector<char> core(n, 0);
    for (int i = 0; i < n; ++i) {
        core[i] = neighbors_of(i).size() >= static_cast<std::size_t>(v_min) ? 1 : 0;
    }

    std::vector<int> cluster_id(n, -1);
    int next_id = 0;
    std::deque<int> queue;
    for (int i = 0; i < n; ++i) {
        if (!core[i] || cluster_id[i] >= 0) continue;
        cluster_id[i] = next_id;
        queue.push_back(i);
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            for (int q : neighbors_of(p)) {
                if (!core[q] || cluster_id[q] >= 0) continue;
                cluster_id[q] = next_id;
                queue.push_back(q);
            }
        }
        ++next_id;
    }

    // border points: nearest core within eps; ties to the lex-smallest core pixel
    for (int i = 0; i < n; ++i) {
        if (core[i]) continue;
        double best = std::numeric_limits<double>::infinity();
        int best_core = -1;
        for (int q : neighbors_of(i)) {
            if (!core[q] || q == i) continue;
            const double d2 = static_cast<double>(pts[i].r - pts[q].r) * (pts[i].r - pts[q].r) +
                              static_cast<double>(pts[i].c - pts[q].c) * (pts[i].c - pts[q].c);
            if (d2 < best || (d2 == best && best_core >= 0 && pts[q] < pts[best_core])) {
                best = d2;
                best_core = q;
            }
        }
        if (best_core >= 0) cluster_id[i] = cluster_id[best_core];
    }

    std::vector<Cluster> clusters(next_id);
    for (auto& cl : clusters) {
        cl.members = PixelMask(mask.height, mask.width);
        cl.slice_index = slice_index;
    }
    for (int i = 0; i < n; ++i) {
        if (cluster_id[i] < 0) continue;  // noise
        Cluster& cl = clusters[cluster_id[i]];
        cl.members.set(pts[i].r, pts[i].c);
        cl.size++;
        cl.centroid_row += pts[i].r;
        cl.centroid_col += pts[i].c;
    }
    std::erase_if(clusters, [](const Cluster& c) { return c.size == 0; });
    for (auto& cl : clusters) {
        cl.centroid_row /= cl.size;
        cl.centroid_col /= cl.size;
    }
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const Cluster& a, const Cluster& b) { return a.size > b.size; });
    return clusters;
}

}  // namespace sozloc
