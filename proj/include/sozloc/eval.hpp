#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sozloc/dataset.hpp"
#include "sozloc/eki.hpp"
#include "sozloc/features.hpp"
#include "sozloc/fusion.hpp"
#include "sozloc/noise_net.hpp"

namespace sozloc {

struct PipelineConfig {
    FeatureConfig features;
    NetworkConfig net;  // gate uses n_classes=1; the SLL baseline runs it with 3
    TrainConfig train;
    double override_threshold = 0.9;
    double eki_ridge = 1e-8;
    int smote_k = 5;
    std::uint64_t seed = 42;
    int threads = 1;
};

nlohmann::ordered_json pipeline_config_to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const nlohmann::ordered_json& doc);

// Everything the fold loop needs per IC; images are dropped after this step.
struct PreprocessedIC {
    std::string ic_id;
    std::string patient_id;
    std::optional<Label> truth;
    FeatureVector features{};
    std::vector<ClusterSummary> clusters;  // full-resolution activation clusters
    std::vector<double> gate_chw;
};

std::vector<PreprocessedIC> preprocess_patient(const PatientRecord& patient,
                                               const PipelineConfig& cfg);

// EKI training on one fold: standardize real RSN/SOZ rows, SMOTE the SOZ
// features up to the RSN count, fit the constrained weights. drop_feature
// removes one component before standardization and fitting.
struct FoldEki {
    EKIModel model;
    std::vector<int> active;  // feature indices in use
};

FoldEki fit_fold_eki(const std::vector<const PreprocessedIC*>& train,
                     const PipelineConfig& cfg, std::optional<int> drop_feature,
                     std::uint64_t seed);

ClassificationResult classify_ic(const PreprocessedIC& ic, double gate_prob, const FoldEki& eki,
                                 double override_threshold);

// Expensive half of LOOCV: per fold, train the gate (and optionally the
// 3-class cost-sensitive baseline) on every other patient and score the
// held-out patient's ICs.
struct GateCache {
    std::vector<std::string> patient_ids;
    std::vector<std::vector<double>> gate_probs;  // [patient][ic] P(not noise)
    std::vector<std::vector<int>> sll_preds;      // [patient][ic], empty unless requested
};

GateCache run_gate_loocv(const std::vector<std::vector<PreprocessedIC>>& patients,
                         const PipelineConfig& cfg, bool with_sll_baseline);

enum class MetricLevel { IC, PATIENT };

struct MetricsReport {
    MetricLevel level = MetricLevel::IC;
    long tp = 0, fp = 0, fn = 0, tn = 0;
    long n = 0;
    std::optional<double> accuracy, precision, sensitivity, f1;
    std::string group;
};

// SOZ is the positive class. At the patient level a patient counts as a hit
// when at least one of its predicted-SOZ ICs is truly SOZ.
MetricsReport compute_metrics(const std::vector<ClassificationResult>& results,
                              const std::vector<Label>& truth, MetricLevel level,
                              const std::vector<std::string>& patient_of = {});

// Cheap half of LOOCV: refits the EKI per fold from cached gate outputs.
struct EvalOutcome {
    std::vector<ClassificationResult> results;  // patient-major order
    std::vector<Label> truth;
    std::vector<std::string> patient_of;
    MetricsReport ic_metrics;
    MetricsReport patient_metrics;
};

EvalOutcome run_eki_loocv(const std::vector<std::vector<PreprocessedIC>>& patients,
                          const GateCache& cache, const PipelineConfig& cfg,
                          std::optional<int> drop_feature = std::nullopt);

// Full protocol in one call (gate + EKI).
EvalOutcome run_loocv(const std::vector<std::vector<PreprocessedIC>>& patients,
                      const PipelineConfig& cfg);

struct AblationRow {
    std::string dropped;  // feature name, or "none" for the full model
    MetricsReport ic_metrics;
    MetricsReport patient_metrics;
    double delta_f1_patient = 0.0;  // ablated minus full, fractional
};

std::vector<AblationRow> ablation_study(const std::vector<std::vector<PreprocessedIC>>& patients,
                                        const GateCache& cache, const PipelineConfig& cfg);

// Metrics per 3-class baseline prediction, for the expert-knowledge-effect
// comparison.
EvalOutcome sll_outcome(const std::vector<std::vector<PreprocessedIC>>& patients,
                        const GateCache& cache);

nlohmann::ordered_json result_to_json(const ClassificationResult& r);
nlohmann::ordered_json metrics_to_json(const MetricsReport& m);
nlohmann::ordered_json outcome_to_json(const EvalOutcome& outcome, const PipelineConfig& cfg);

// Patient-level metric breakdowns by age bin or sex.
std::vector<MetricsReport> grouped_patient_metrics(const EvalOutcome& outcome,
                                                   const std::vector<PatientRecord>& patients,
                                                   const std::string& group_by);

std::uint64_t fold_seed(std::uint64_t base, const std::string& patient_id);

}  // namespace sozloc
