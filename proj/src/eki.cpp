#include "sozloc/eki.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sozloc/errors.hpp"
#include "sozloc/io_util.hpp"

using json = nlohmann::ordered_json;

namespace sozloc {

std::string to_string(EkiLabel l) { return l == EkiLabel::SOZ ? "SOZ" : "RSN"; }

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ArgumentError("standardizer: no samples");
    const std::size_t dim = rows.front().size();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.std_dev.assign(dim, 0.0);
    for (const auto& row : rows) {
        for (std::size_t f = 0; f < dim; ++f) s.mean[f] += row[f];
    }
    for (std::size_t f = 0; f < dim; ++f) s.mean[f] /= static_cast<double>(rows.size());
    for (const auto& row : rows) {
        for (std::size_t f = 0; f < dim; ++f) {
            const double d = row[f] - s.mean[f];
            s.std_dev[f] += d * d;
        }
    }
    for (std::size_t f = 0; f < dim; ++f) {
        s.std_dev[f] = std::max(std::sqrt(s.std_dev[f] / static_cast<double>(rows.size())), 1e-9);
    }
    return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    if (row.size() != mean.size()) throw ArgumentError("standardizer: dimension mismatch");
    std::vector<double> out(row.size());
    for (std::size_t f = 0; f < row.size(); ++f) out[f] = (row[f] - mean[f]) / std_dev[f];
    return out;
}

namespace {

double row_norm(const std::vector<double>& row) {
    double acc = 0.0;
    for (double v : row) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace

double eki_objective(const std::vector<std::vector<double>>& standardized_features,
                     const std::vector<int>& labels, const std::vector<double>& omega) {
    double acc = 0.0;
    for (std::size_t i = 0; i < standardized_features.size(); ++i) {
        const auto& row = standardized_features[i];
        const double norm = row_norm(row);
        if (norm <= 0.0) continue;
        double dot = 0.0;
        for (std::size_t f = 0; f < row.size(); ++f) dot += omega[f] * row[f] / norm;
        const double miss = 1.0 - labels[i] * dot;
        acc += miss * miss;
    }
    return acc;
}

std::vector<double> fit_weights(const std::vector<std::vector<double>>& standardized_features,
                                const std::vector<int>& labels, double ridge) {
    if (standardized_features.size() != labels.size()) {
        throw ArgumentError("fit_weights: features/labels size mismatch");
    }
    if (standardized_features.size() < 2) throw ArgumentError("fit_weights: need at least 2 samples");
    const int dim = static_cast<int>(standardized_features.front().size());
    if (dim < 1) throw ArgumentError("fit_weights: empty feature vectors");

    // direction-normalize, skipping zero-norm rows
    std::vector<std::vector<double>> g;
    std::vector<int> y;
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < standardized_features.size(); ++i) {
        const double norm = row_norm(standardized_features[i]);
        if (norm <= 0.0) continue;
        std::vector<double> row(dim);
        for (int f = 0; f < dim; ++f) row[f] = standardized_features[i][f] / norm;
        g.push_back(std::move(row));
        y.push_back(labels[i]);
        (labels[i] > 0 ? pos : neg) = true;
    }
    if (!pos || !neg) throw ArgumentError("fit_weights: both labels must be present");

    // KKT system [2 G^T G + 2 ridge I, 1; 1^T, 0] [omega; lambda] = [2 G^T y; 1]
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int a = 0; a < dim; ++a) {
            rhs(a) += 2.0 * g[i][a] * y[i];
            for (int b = 0; b < dim; ++b) kkt(a, b) += 2.0 * g[i][a] * g[i][b];
        }
    }
    for (int a = 0; a < dim; ++a) {
        kkt(a, a) += 2.0 * ridge;
        kkt(a, dim) = 1.0;
        kkt(dim, a) = 1.0;
    }
    rhs(dim) = 1.0;

    const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    const double residual = (kkt * sol - rhs).norm();
    if (!sol.allFinite() || residual > 1e-6 * std::max(1.0, rhs.norm())) {
        throw NumericError("fit_weights: singular KKT system");
    }
    std::vector<double> omega(dim);
    for (int a = 0; a < dim; ++a) omega[a] = sol(a);
    return omega;
}

double confidence_score(const EKIModel& model, const std::vector<double>& standardized) {
    const double norm = row_norm(standardized);
    if (norm <= 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t f = 0; f < standardized.size(); ++f) {
        dot += model.omega[f] * standardized[f] / norm;
    }
    return dot;
}

EkiLabel eki_label(double rho, double threshold) {
    return rho > threshold ? EkiLabel::SOZ : EkiLabel::RSN;
}

void save_eki_model(const EKIModel& model, const std::string& path) {
    json doc;
    doc["mean"] = model.standardizer.mean;
    doc["std"] = model.standardizer.std_dev;
    doc["omega"] = model.omega;
    doc["soz_threshold_rho"] = model.soz_threshold_rho;
    doc["override_threshold"] = model.override_threshold;
    atomic_write_text(path, doc.dump(2) + "\n");
}

EKIModel load_eki_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open EKI model: " + path);
    json doc;
    try {
        doc = json::parse(in);
        EKIModel model;
        model.standardizer.mean = doc.at("mean").get<std::vector<double>>();
        model.standardizer.std_dev = doc.at("std").get<std::vector<double>>();
        model.omega = doc.at("omega").get<std::vector<double>>();
        model.soz_threshold_rho = doc.value("soz_threshold_rho", 0.0);
        model.override_threshold = doc.value("override_threshold", 0.9);
        if (model.omega.size() != model.standardizer.mean.size() ||
            model.omega.size() != model.standardizer.std_dev.size()) {
            throw DataError("EKI model " + path + ": inconsistent dimensions");
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError("malformed EKI model " + path + ": " + e.what());
    }
}

}  // namespace sozloc
