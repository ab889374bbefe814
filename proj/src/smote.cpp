#include "sozloc/smote.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sozloc/errors.hpp"

namespace sozloc {

std::vector<FeatureVector> smote_oversample(const std::vector<FeatureVector>& minority,
                                            const SmoteConfig& cfg) {
    const int n = static_cast<int>(minority.size());
    if (n < 2) throw ArgumentError("smote: need at least 2 minority samples");
    if (cfg.k_neighbors < 1) throw ArgumentError("smote: k_neighbors must be >= 1");
    if (cfg.k_neighbors >= n) throw ArgumentError("smote: k_neighbors must be below the minority count");
    if (cfg.target_count < n) throw ArgumentError("smote: target_count below current minority count");

    // k nearest neighbors per sample, by squared Euclidean distance
    std::vector<std::vector<int>> knn(n);
    std::vector<std::pair<double, int>> dists;
    for (int i = 0; i < n; ++i) {
        dists.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (int f = 0; f < 4; ++f) {
                const double d = minority[i][f] - minority[j][f];
                d2 += d * d;
            }
            dists.push_back({d2, j});
        }
        std::sort(dists.begin(), dists.end());
        for (int k = 0; k < cfg.k_neighbors; ++k) knn[i].push_back(dists[k].second);
    }

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, cfg.k_neighbors - 1);

    std::vector<FeatureVector> synthetic;
    const int want = cfg.target_count - n;
    for (int s = 0; s < want; ++s) {
        const int base = s % n;
        const int nn = knn[base][pick(rng)];
        const double lambda = cfg.fixed_lambda ? *cfg.fixed_lambda : uni(rng);
        FeatureVector v;
        for (int f = 0; f < 4; ++f) {
            v[f] = minority[base][f] + lambda * (minority[nn][f] - minority[base][f]);
        }
        synthetic.push_back(v);
    }
    return synthetic;
}

}  // namespace sozloc
