#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sozloc/features.hpp"

namespace sozloc {

struct SmoteConfig {
    int k_neighbors = 5;
    int target_count = 0;  // desired minority size after oversampling
    std::uint64_t seed = 0;
    // test hook: forces the interpolation factor instead of drawing U(0,1)
    std::optional<double> fixed_lambda;
};

// Synthetic minority samples by linear interpolation towards one of the k
// Euclidean nearest neighbors. Returns target_count - |minority| vectors;
// the originals are untouched. Deterministic for a fixed seed.
std::vector<FeatureVector> smote_oversample(const std::vector<FeatureVector>& minority,
                                            const SmoteConfig& cfg);

}  // namespace sozloc
