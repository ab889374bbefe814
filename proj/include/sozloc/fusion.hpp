#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sozloc/dataset.hpp"
#include "sozloc/eki.hpp"
#include "sozloc/slices.hpp"

namespace sozloc {

struct Explanation {
    std::string feature;  // one of kFeatureNames
    double contribution = 0.0;
};

struct ClusterSummary {
    int slice_index = 0;
    long size = 0;
    double centroid_row = 0.0;
    double centroid_col = 0.0;
};

struct ClassificationResult {
    std::string ic_id;
    std::string patient_id;
    BinaryLabel dl_label = BinaryLabel::NOISE;
    double dl_prob = 0.0;  // P(not noise)
    EkiLabel eki = EkiLabel::RSN;
    double rho = 0.0;
    Label final_label = Label::NOISE;
    std::optional<Explanation> explanation;     // present iff final_label == SOZ
    std::optional<ClusterSummary> soz_cluster;  // present iff SOZ and localizable
    bool unlocalized = false;
};

// Dual-assessment rule: a NOT_NOISE gate verdict passes the EKI label
// through; a NOISE verdict is overridden to SOZ only when rho clears the
// override threshold strictly.
Label fuse_labels(BinaryLabel dl, EkiLabel eki, double rho, double override_threshold = 0.9);

// Highest-contribution expert component omega_j * F_j; ties break to the
// lowest feature index.
Explanation explain_selection(const EKIModel& model, const std::vector<double>& standardized);

// Largest cluster across an IC's slices; ties break to the lower slice index,
// then to the lexicographically smaller centroid. Empty input means the IC
// cannot be localized.
std::optional<ClusterSummary> localize_soz(const std::vector<ClusterSummary>& clusters);

}  // namespace sozloc
