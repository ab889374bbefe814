#include "sozloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sozloc/errors.hpp"

namespace sozloc {

void validate_sparsity_config(const SparsityConfig& cfg) {
    if (cfg.window_len < 16 || (cfg.window_len & (cfg.window_len - 1)) != 0) {
        throw ArgumentError("sparsity: window_len must be a power of two >= 16");
    }
    if (cfg.wavelet_levels < 1) throw ArgumentError("sparsity: need at least one wavelet level");
    if (!(cfg.tr_seconds > 0)) throw ArgumentError("sparsity: TR must be positive");
    const double nyquist = 0.5 / cfg.tr_seconds;
    if (!(cfg.band_lo_hz > 0) || !(cfg.band_lo_hz < cfg.band_hi_hz) || cfg.band_hi_hz > nyquist) {
        throw ArgumentError("sparsity: band must satisfy 0 < lo < hi <= Nyquist");
    }
}

double gini_index(const std::vector<double>& v) {
    if (v.empty()) throw ArgumentError("gini_index: empty vector");
    std::vector<double> mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    std::sort(mags.begin(), mags.end());
    const double norm1 = std::accumulate(mags.begin(), mags.end(), 0.0);
    if (norm1 <= 0.0) return 0.0;
    const double n = static_cast<double>(mags.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        acc += mags[k] / norm1 * ((n - (k + 1) + 0.5) / n);
    }
    return 1.0 - 2.0 * acc;
}

std::vector<std::vector<double>> atrous_transform(const std::vector<double>& window, int levels) {
    if (levels < 1) throw ArgumentError("atrous_transform: levels must be >= 1");
    if (window.size() < 2) throw ArgumentError("atrous_transform: window too short");
    const int n = static_cast<int>(window.size());
    // mirror about the edge samples (no edge repetition)
    auto mirrored = [&](const std::vector<double>& x, int i) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i;
            if (i >= n) i = 2 * n - 2 - i;
        }
        return x[i];
    };
    static constexpr double kB3[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

    std::vector<std::vector<double>> bands;
    std::vector<double> smooth = window;
    for (int level = 1; level <= levels; ++level) {
        const int step = 1 << (level - 1);
        std::vector<double> next(n);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) {
                acc += kB3[k + 2] * mirrored(smooth, i + k * step);
            }
            next[i] = acc;
        }
        std::vector<double> detail(n);
        for (int i = 0; i < n; ++i) detail[i] = smooth[i] - next[i];
        bands.push_back(std::move(detail));
        smooth = std::move(next);
    }
    bands.push_back(std::move(smooth));
    return bands;
}

std::vector<double> band_sine_coefficients(const std::vector<double>& window,
                                           const SparsityConfig& cfg) {
    validate_sparsity_config(cfg);
    if (window.empty()) throw ArgumentError("band_sine_coefficients: empty window");
    const int n = static_cast<int>(window.size());
    const double duration = n * cfg.tr_seconds;
    const int k_lo = static_cast<int>(std::ceil(cfg.band_lo_hz * duration - 1e-12));
    const int k_hi = std::min(n / 2, static_cast<int>(std::floor(cfg.band_hi_hz * duration + 1e-12)));
    std::vector<double> mags;
    for (int k = std::max(1, k_lo); k <= k_hi; ++k) {
        double re = 0.0, im = 0.0;
        for (int t = 0; t < n; ++t) {
            const double angle = -2.0 * std::numbers::pi * k * t / n;
            re += window[t] * std::cos(angle);
            im += window[t] * std::sin(angle);
        }
        mags.push_back(std::hypot(re, im));
    }
    return mags;
}

bool wm_ventricle_extension(const std::vector<Cluster>& clusters,
                            const std::vector<Contour>& contours, const PixelMask& ventricle_mask,
                            int cluster_px_threshold) {
    if (clusters.empty() || contours.empty()) return false;
    const Contour& prominent = contours.front();

    PixelMask band(ventricle_mask.height, ventricle_mask.width);
    for (const auto& p : prominent.chain) {
        for (int dr = -3; dr <= 3; ++dr) {
            for (int dc = -3; dc <= 3; ++dc) {
                if (dr * dr + dc * dc > 9) continue;
                const int nr = p.r + dr, nc = p.c + dc;
                if (nr >= 0 && nr < band.height && nc >= 0 && nc < band.width) band.set(nr, nc);
            }
        }
    }

    for (const auto& cluster : clusters) {
        if (cluster.size <= cluster_px_threshold) continue;
        bool hits_band = false, hits_ventricle = false;
        for (int r = 0; r < cluster.members.height && !(hits_band && hits_ventricle); ++r) {
            for (int c = 0; c < cluster.members.width; ++c) {
                if (!cluster.members.test(r, c)) continue;
                if (band.test(r, c)) hits_band = true;
                if (ventricle_mask.test(r, c)) hits_ventricle = true;
                if (hits_band && hits_ventricle) break;
            }
        }
        if (hits_band && hits_ventricle) return true;
    }
    return false;
}

FeatureVector extract_features(const ICRecord& ic, const FeatureConfig& cfg) {
    validate_sparsity_config(cfg.sparsity);
    if (ic.image.empty()) throw ArgumentError("extract_features: IC has no image");
    if (ic.timecourse.empty()) throw ArgumentError("extract_features: IC has no timecourse");

    const std::vector<BrainSlice> slices = extract_slices(ic.image, cfg.slices);
    const int n_slices = static_cast<int>(slices.size());

    double cluster_count = 0.0;
    int basal_total = 0, basal_qualifying = 0;
    for (const auto& slice : slices) {
        const PixelMask mask = activation_mask(slice, cfg.slices);
        const std::vector<Cluster> clusters =
            cluster_activations(mask, cfg.slices.dbscan_eps, cfg.slices.dbscan_vmin, slice.index);
        for (const auto& cluster : clusters) {
            if (cluster.size > cfg.slices.cluster_px_threshold) cluster_count += 1.0;
        }
        if (is_basal(slice.index, n_slices, cfg.slices.basal_last)) {
            ++basal_total;
            const GrayImage suppressed = suppress_activation(slice, cfg.slices);
            const std::vector<Contour> contours = detect_contours(suppressed);
            const PixelMask ventricle = ventricle_region(slice, contours, true);
            if (wm_ventricle_extension(clusters, contours, ventricle, cfg.slices.cluster_px_threshold)) {
                ++basal_qualifying;
            }
        }
    }
    const double wm_rate = basal_total > 0 ? static_cast<double>(basal_qualifying) / basal_total : 0.0;

    // non-overlapping windows; a short timecourse forms one full-length window
    const int len = static_cast<int>(ic.timecourse.size());
    std::vector<std::pair<int, int>> windows;
    if (len < cfg.sparsity.window_len) {
        windows.push_back({0, len});
    } else {
        for (int start = 0; start + cfg.sparsity.window_len <= len; start += cfg.sparsity.window_len) {
            windows.push_back({start, cfg.sparsity.window_len});
        }
    }

    double activelet_acc = 0.0, sine_acc = 0.0;
    for (const auto& [start, count] : windows) {
        const std::vector<double> window(ic.timecourse.begin() + start,
                                         ic.timecourse.begin() + start + count);
        auto bands = atrous_transform(window, cfg.sparsity.wavelet_levels);
        std::vector<double> details;
        for (int level = 0; level < cfg.sparsity.wavelet_levels; ++level) {
            details.insert(details.end(), bands[level].begin(), bands[level].end());
        }
        activelet_acc += gini_index(details);

        const std::vector<double> sine = band_sine_coefficients(window, cfg.sparsity);
        sine_acc += sine.empty() ? 0.0 : gini_index(sine);
    }
    const double n_windows = static_cast<double>(windows.size());

    return {cluster_count, wm_rate, activelet_acc / n_windows, sine_acc / n_windows};
}

}  // namespace sozloc
