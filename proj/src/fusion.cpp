#include "sozloc/fusion.hpp"

namespace sozloc {

Label fuse_labels(BinaryLabel dl, EkiLabel eki, double rho, double override_threshold) {
    if (dl == BinaryLabel::NOT_NOISE) {
        return eki == EkiLabel::SOZ ? Label::SOZ : Label::RSN;
    }
    return rho > override_threshold ? Label::SOZ : Label::NOISE;
}

Explanation explain_selection(const EKIModel& model, const std::vector<double>& standardized) {
    std::size_t best = 0;
    double best_val = model.omega[0] * standardized[0];
    for (std::size_t f = 1; f < model.omega.size(); ++f) {
        const double val = model.omega[f] * standardized[f];
        if (val > best_val) {
            best_val = val;
            best = f;
        }
    }
    return {kFeatureNames[best], best_val};
}

std::optional<ClusterSummary> localize_soz(const std::vector<ClusterSummary>& clusters) {
    if (clusters.empty()) return std::nullopt;
    const ClusterSummary* best = &clusters.front();
    for (const auto& c : clusters) {
        if (c.size > best->size) {
            best = &c;
        } else if (c.size == best->size) {
            if (c.slice_index < best->slice_index ||
                (c.slice_index == best->slice_index &&
                 std::pair{c.centroid_row, c.centroid_col} <
                     std::pair{best->centroid_row, best->centroid_col})) {
                best = &c;
            }
        }
    }
    return *best;
}

}  // namespace sozloc
