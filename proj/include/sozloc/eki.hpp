#pragma once

#include <string>
#include <vector>

#include "sozloc/features.hpp"

namespace sozloc {

enum class EkiLabel { RSN, SOZ };

std::string to_string(EkiLabel l);

// Per-component z-scoring, fitted on real (non-synthetic) RSN/SOZ features.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> std_dev;  // floored at 1e-9

    static Standardizer fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> apply(const std::vector<double>& row) const;
};

struct EKIModel {
    std::vector<double> omega;  // sums to 1
    Standardizer standardizer;
    double soz_threshold_rho = 0.0;
    double override_threshold = 0.9;
};

// Equality-constrained least squares over direction-normalized rows:
// minimize sum (1 - y_i * omega . g_i)^2 with g_i = F_i/|F_i|, subject to
// sum(omega) = 1, solved through the KKT system with a small ridge.
// Zero-norm rows are skipped. Throws ArgumentError unless both labels remain,
// NumericError if the system cannot be solved reliably.
std::vector<double> fit_weights(const std::vector<std::vector<double>>& standardized_features,
                                const std::vector<int>& labels /* -1 RSN, +1 SOZ */,
                                double ridge = 1e-8);

// Objective evaluated at an arbitrary weight vector; the brute-force oracle
// in the tests searches this directly.
double eki_objective(const std::vector<std::vector<double>>& standardized_features,
                     const std::vector<int>& labels, const std::vector<double>& omega);

// rho = omega . F / |F|; zero-norm F scores 0.
double confidence_score(const EKIModel& model, const std::vector<double>& standardized);

// SOZ strictly above the threshold; boundary resolves to RSN.
EkiLabel eki_label(double rho, double threshold = 0.0);

void save_eki_model(const EKIModel& model, const std::string& path);
EKIModel load_eki_model(const std::string& path);

}  // namespace sozloc
