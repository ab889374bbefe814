#pragma once

#include <array>
#include <string>
#include <vector>

#include "sozloc/dataset.hpp"
#include "sozloc/slices.hpp"

namespace sozloc {

// Expert feature vector per IC:
//   [0] cluster count (clusters above the pixel threshold, summed over slices)
//   [1] white-matter-to-ventricle extension rate over basal slices
//   [2] mean Gini sparsity of the a-trous wavelet details
//   [3] mean Gini sparsity of the in-band sine coefficients
using FeatureVector = std::array<double, 4>;

inline constexpr std::array<const char*, 4> kFeatureNames = {
    "cluster_count", "wm_ventricle", "activelet_gini", "sine_gini"};

struct SparsityConfig {
    int window_len = 256;
    int wavelet_levels = 4;
    double band_lo_hz = 0.01;
    double band_hi_hz = 0.1;
    double tr_seconds = 2.0;
};

void validate_sparsity_config(const SparsityConfig& cfg);

// Sparsity in [0,1]: 0 for uniform magnitudes, 1-1/N for one-hot.
// Scale- and permutation-invariant; all-zero input gives 0.
double gini_index(const std::vector<double>& v);

// Undecimated B3-spline wavelet decomposition ("a trous"): returns `levels`
// detail bands of window length, finest first, plus the final smooth as the
// last row. Mirrored boundaries; the bands telescope back to the input.
std::vector<std::vector<double>> atrous_transform(const std::vector<double>& window, int levels);

// Magnitudes of the DFT coefficients whose frequency k/(N*TR) lies in
// [band_lo, band_hi].
std::vector<double> band_sine_coefficients(const std::vector<double>& window,
                                           const SparsityConfig& cfg);

// True iff some cluster above the size threshold touches both the 3 px band
// of the most prominent contour and the ventricle mask.
bool wm_ventricle_extension(const std::vector<Cluster>& clusters,
                            const std::vector<Contour>& contours, const PixelMask& ventricle_mask,
                            int cluster_px_threshold);

struct FeatureConfig {
    SparsityConfig sparsity;
    SlicesConfig slices;
};

FeatureVector extract_features(const ICRecord& ic, const FeatureConfig& cfg);

}  // namespace sozloc
