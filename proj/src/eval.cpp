#include "sozloc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "sozloc/errors.hpp"
#include "sozloc/smote.hpp"

using json = nlohmann::ordered_json;

namespace sozloc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

std::uint64_t fold_seed(std::uint64_t base, const std::string& patient_id) {
    return splitmix64(base ^ fnv1a(patient_id));
}

json pipeline_config_to_json(const PipelineConfig& cfg) {
    json doc;
    doc["seed"] = cfg.seed;
    doc["threads"] = cfg.threads;
    doc["override_threshold"] = cfg.override_threshold;
    doc["eki_ridge"] = cfg.eki_ridge;
    doc["smote_k"] = cfg.smote_k;
    json slices;
    if (cfg.features.slices.layout) {
        slices["layout"] = {cfg.features.slices.layout->first, cfg.features.slices.layout->second};
    } else {
        slices["layout"] = nullptr;
    }
    slices["bg_threshold"] = cfg.features.slices.bg_threshold;
    slices["activation_delta"] = cfg.features.slices.activation_delta;
    slices["dbscan_eps"] = cfg.features.slices.dbscan_eps;
    slices["dbscan_vmin"] = cfg.features.slices.dbscan_vmin;
    slices["cluster_px_threshold"] = cfg.features.slices.cluster_px_threshold;
    slices["basal_last"] = cfg.features.slices.basal_last;
    doc["slices"] = slices;
    json sparsity;
    sparsity["window_len"] = cfg.features.sparsity.window_len;
    sparsity["wavelet_levels"] = cfg.features.sparsity.wavelet_levels;
    sparsity["band_lo_hz"] = cfg.features.sparsity.band_lo_hz;
    sparsity["band_hi_hz"] = cfg.features.sparsity.band_hi_hz;
    sparsity["tr_seconds"] = cfg.features.sparsity.tr_seconds;
    doc["sparsity"] = sparsity;
    json net;
    net["input_h"] = cfg.net.input_h;
    net["input_w"] = cfg.net.input_w;
    net["conv_filters"] = {cfg.net.conv_filters[0], cfg.net.conv_filters[1], cfg.net.conv_filters[2]};
    net["dense_units"] = cfg.net.dense_units;
    net["dropout"] = cfg.net.dropout;
    net["learning_rate"] = cfg.net.learning_rate;
    doc["net"] = net;
    json train;
    train["max_epochs"] = cfg.train.max_epochs;
    train["batch_size"] = cfg.train.batch_size;
    train["patience"] = cfg.train.patience;
    train["val_fraction"] = cfg.train.val_fraction;
    doc["train"] = train;
    return doc;
}

PipelineConfig pipeline_config_from_json(const json& doc) {
    PipelineConfig cfg;
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.threads = doc.value("threads", cfg.threads);
    cfg.override_threshold = doc.value("override_threshold", cfg.override_threshold);
    cfg.eki_ridge = doc.value("eki_ridge", cfg.eki_ridge);
    cfg.smote_k = doc.value("smote_k", cfg.smote_k);
    if (doc.contains("slices")) {
        const auto& s = doc["slices"];
        if (s.contains("layout") && !s["layout"].is_null()) {
            cfg.features.slices.layout = {s["layout"][0].get<int>(), s["layout"][1].get<int>()};
        }
        cfg.features.slices.bg_threshold = s.value("bg_threshold", cfg.features.slices.bg_threshold);
        cfg.features.slices.activation_delta =
            s.value("activation_delta", cfg.features.slices.activation_delta);
        cfg.features.slices.dbscan_eps = s.value("dbscan_eps", cfg.features.slices.dbscan_eps);
        cfg.features.slices.dbscan_vmin = s.value("dbscan_vmin", cfg.features.slices.dbscan_vmin);
        cfg.features.slices.cluster_px_threshold =
            s.value("cluster_px_threshold", cfg.features.slices.cluster_px_threshold);
        cfg.features.slices.basal_last = s.value("basal_last", cfg.features.slices.basal_last);
    }
    if (doc.contains("sparsity")) {
        const auto& s = doc["sparsity"];
        cfg.features.sparsity.window_len = s.value("window_len", cfg.features.sparsity.window_len);
        cfg.features.sparsity.wavelet_levels =
            s.value("wavelet_levels", cfg.features.sparsity.wavelet_levels);
        cfg.features.sparsity.band_lo_hz = s.value("band_lo_hz", cfg.features.sparsity.band_lo_hz);
        cfg.features.sparsity.band_hi_hz = s.value("band_hi_hz", cfg.features.sparsity.band_hi_hz);
        cfg.features.sparsity.tr_seconds = s.value("tr_seconds", cfg.features.sparsity.tr_seconds);
    }
    if (doc.contains("net")) {
        const auto& n = doc["net"];
        cfg.net.input_h = n.value("input_h", cfg.net.input_h);
        cfg.net.input_w = n.value("input_w", cfg.net.input_w);
        if (n.contains("conv_filters")) {
            for (int i = 0; i < 3; ++i) cfg.net.conv_filters[i] = n["conv_filters"][i].get<int>();
        }
        cfg.net.dense_units = n.value("dense_units", cfg.net.dense_units);
        cfg.net.dropout = n.value("dropout", cfg.net.dropout);
        cfg.net.learning_rate = n.value("learning_rate", cfg.net.learning_rate);
    }
    if (doc.contains("train")) {
        const auto& t = doc["train"];
        cfg.train.max_epochs = t.value("max_epochs", cfg.train.max_epochs);
        cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        cfg.train.patience = t.value("patience", cfg.train.patience);
        cfg.train.val_fraction = t.value("val_fraction", cfg.train.val_fraction);
    }
    return cfg;
}

std::vector<PreprocessedIC> preprocess_patient(const PatientRecord& patient,
                                               const PipelineConfig& cfg) {
    std::vector<PreprocessedIC> out(patient.ics.size());
    parallel_for(static_cast<int>(patient.ics.size()), cfg.threads, [&](int i) {
        const ICRecord& ic = patient.ics[i];
        PreprocessedIC pre;
        pre.ic_id = ic.ic_id;
        pre.patient_id = ic.patient_id;
        pre.truth = ic.label;
        pre.features = extract_features(ic, cfg.features);
        const std::vector<BrainSlice> slices = extract_slices(ic.image, cfg.features.slices);
        for (const auto& slice : slices) {
            const PixelMask mask = activation_mask(slice, cfg.features.slices);
            for (const auto& cluster :
                 cluster_activations(mask, cfg.features.slices.dbscan_eps,
                                     cfg.features.slices.dbscan_vmin, slice.index)) {
                pre.clusters.push_back(
                    {cluster.slice_index, cluster.size, cluster.centroid_row, cluster.centroid_col});
            }
        }
        pre.gate_chw = NoiseNet::to_chw(ic.image, cfg.net.input_h, cfg.net.input_w);
        out[i] = std::move(pre);
    });
    return out;
}

FoldEki fit_fold_eki(const std::vector<const PreprocessedIC*>& train, const PipelineConfig& cfg,
                     std::optional<int> drop_feature, std::uint64_t seed) {
    FoldEki out;
    for (int f = 0; f < 4; ++f) {
        if (!drop_feature || *drop_feature != f) out.active.push_back(f);
    }
    const std::size_t dim = out.active.size();

    std::vector<std::vector<double>> rsn_rows, soz_rows;
    for (const PreprocessedIC* ic : train) {
        if (!ic->truth) throw ArgumentError("EKI fit: IC '" + ic->ic_id + "' has no label");
        if (*ic->truth == Label::NOISE) continue;
        std::vector<double> row(dim);
        for (std::size_t f = 0; f < dim; ++f) row[f] = ic->features[out.active[f]];
        (*ic->truth == Label::RSN ? rsn_rows : soz_rows).push_back(std::move(row));
    }
    if (rsn_rows.empty() || soz_rows.empty()) {
        throw ArgumentError("EKI fit: need both RSN and SOZ training ICs");
    }

    // standardizer on real samples only
    std::vector<std::vector<double>> all_real = rsn_rows;
    all_real.insert(all_real.end(), soz_rows.begin(), soz_rows.end());
    out.model.standardizer = Standardizer::fit(all_real);
    out.model.override_threshold = cfg.override_threshold;

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (const auto& r : rsn_rows) {
        rows.push_back(out.model.standardizer.apply(r));
        labels.push_back(-1);
    }
    std::vector<FeatureVector> soz_std;
    for (const auto& r : soz_rows) {
        const std::vector<double> z = out.model.standardizer.apply(r);
        rows.push_back(z);
        labels.push_back(+1);
        FeatureVector v{0, 0, 0, 0};
        for (std::size_t f = 0; f < dim; ++f) v[f] = z[f];
        soz_std.push_back(v);
    }

    // balance SOZ up to the RSN count in standardized space
    if (soz_rows.size() < rsn_rows.size() && soz_rows.size() >= 2) {
        SmoteConfig smote;
        smote.k_neighbors = std::min<int>(cfg.smote_k, static_cast<int>(soz_rows.size()) - 1);
        smote.target_count = static_cast<int>(rsn_rows.size());
        smote.seed = splitmix64(seed ^ 0x5307eULL);
        for (const FeatureVector& v : smote_oversample(soz_std, smote)) {
            std::vector<double> row(dim);
            for (std::size_t f = 0; f < dim; ++f) row[f] = v[f];
            rows.push_back(std::move(row));
            labels.push_back(+1);
        }
    }

    out.model.omega = fit_weights(rows, labels, cfg.eki_ridge);
    return out;
}

namespace {

std::vector<double> subset_features(const FeatureVector& f, const std::vector<int>& active) {
    std::vector<double> row(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) row[i] = f[active[i]];
    return row;
}

}  // namespace

ClassificationResult classify_ic(const PreprocessedIC& ic, double gate_prob, const FoldEki& eki,
                                 double override_threshold) {
    ClassificationResult r;
    r.ic_id = ic.ic_id;
    r.patient_id = ic.patient_id;
    r.dl_prob = gate_prob;
    r.dl_label = gate_prob > 0.5 ? BinaryLabel::NOT_NOISE : BinaryLabel::NOISE;

    const std::vector<double> z = eki.model.standardizer.apply(subset_features(ic.features, eki.active));
    r.rho = confidence_score(eki.model, z);
    r.eki = eki_label(r.rho, eki.model.soz_threshold_rho);
    r.final_label = fuse_labels(r.dl_label, r.eki, r.rho, override_threshold);

    if (r.final_label == Label::SOZ) {
        // argmax of omega_j * z_j, ties to the lowest index; the name maps
        // back through the active subset
        std::size_t best = 0;
        double best_val = eki.model.omega[0] * z[0];
        for (std::size_t f = 1; f < z.size(); ++f) {
            if (eki.model.omega[f] * z[f] > best_val) {
                best_val = eki.model.omega[f] * z[f];
                best = f;
            }
        }
        r.explanation = Explanation{kFeatureNames[eki.active[best]], best_val};
        const auto localized = localize_soz(ic.clusters);
        if (localized) {
            r.soz_cluster = *localized;
        } else {
            r.unlocalized = true;
        }
    }
    return r;
}

GateCache run_gate_loocv(const std::vector<std::vector<PreprocessedIC>>& patients,
                         const PipelineConfig& cfg, bool with_sll_baseline) {
    if (patients.size() < 2) throw ArgumentError("LOOCV needs at least 2 patients");
    GateCache cache;
    cache.patient_ids.resize(patients.size());
    cache.gate_probs.resize(patients.size());
    if (with_sll_baseline) cache.sll_preds.resize(patients.size());

    for (std::size_t p = 0; p < patients.size(); ++p) {
        if (patients[p].empty()) throw ArgumentError("LOOCV: empty patient");
        const std::string& test_id = patients[p].front().patient_id;
        cache.patient_ids[p] = test_id;

        std::vector<Sample> gate_train;
        std::vector<Sample> sll_train;
        for (std::size_t q = 0; q < patients.size(); ++q) {
            if (q == p) continue;
            for (const auto& ic : patients[q]) {
                // leakage guard: no test-patient IC may enter any fitting step
                if (ic.patient_id == test_id) {
                    throw DataError("LOOCV leakage: training IC claims the test patient id");
                }
                if (!ic.truth) throw ArgumentError("LOOCV: IC '" + ic.ic_id + "' has no label");
                gate_train.push_back({ic.gate_chw, to_binary(*ic.truth) == BinaryLabel::NOT_NOISE ? 1 : 0});
                if (with_sll_baseline) {
                    sll_train.push_back({ic.gate_chw, static_cast<int>(*ic.truth)});
                }
            }
        }

        TrainConfig fold_train = cfg.train;
        fold_train.seed = fold_seed(cfg.seed, test_id);
        const NoiseNet gate = train_binary(gate_train, cfg.net, fold_train);
        for (const auto& ic : patients[p]) {
            cache.gate_probs[p].push_back(gate.forward(ic.gate_chw)[0]);
        }

        if (with_sll_baseline) {
            NetworkConfig sll_cfg = cfg.net;
            sll_cfg.n_classes = 3;
            TrainConfig sll_train_cfg = cfg.train;
            sll_train_cfg.seed = fold_seed(cfg.seed ^ 0x511ULL, test_id);
            const NoiseNet sll = train_multiclass_baseline(sll_train, sll_cfg, sll_train_cfg);
            for (const auto& ic : patients[p]) {
                const std::vector<double> probs = sll.forward(ic.gate_chw);
                cache.sll_preds[p].push_back(
                    static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin()));
            }
        }
    }
    return cache;
}

EvalOutcome run_eki_loocv(const std::vector<std::vector<PreprocessedIC>>& patients,
                          const GateCache& cache, const PipelineConfig& cfg,
                          std::optional<int> drop_feature) {
    EvalOutcome outcome;
    for (std::size_t p = 0; p < patients.size(); ++p) {
        const std::string& test_id = cache.patient_ids[p];
        std::vector<const PreprocessedIC*> train;
        std::set<std::string> train_ids;
        for (std::size_t q = 0; q < patients.size(); ++q) {
            if (q == p) continue;
            for (const auto& ic : patients[q]) {
                train.push_back(&ic);
                train_ids.insert(ic.patient_id);
            }
        }
        if (train_ids.contains(test_id)) {
            throw DataError("LOOCV leakage: test patient present in the training fold");
        }
        const FoldEki eki = fit_fold_eki(train, cfg, drop_feature, fold_seed(cfg.seed, test_id));
        for (std::size_t i = 0; i < patients[p].size(); ++i) {
            const PreprocessedIC& ic = patients[p][i];
            outcome.results.push_back(
                classify_ic(ic, cache.gate_probs[p][i], eki, cfg.override_threshold));
            outcome.truth.push_back(ic.truth.value());
            outcome.patient_of.push_back(ic.patient_id);
        }
    }
    outcome.ic_metrics = compute_metrics(outcome.results, outcome.truth, MetricLevel::IC);
    outcome.patient_metrics =
        compute_metrics(outcome.results, outcome.truth, MetricLevel::PATIENT, outcome.patient_of);
    return outcome;
}

EvalOutcome run_loocv(const std::vector<std::vector<PreprocessedIC>>& patients,
                      const PipelineConfig& cfg) {
    const GateCache cache = run_gate_loocv(patients, cfg, false);
    return run_eki_loocv(patients, cache, cfg);
}

EvalOutcome sll_outcome(const std::vector<std::vector<PreprocessedIC>>& patients,
                        const GateCache& cache) {
    if (cache.sll_preds.empty()) throw ArgumentError("sll_outcome: baseline predictions missing");
    EvalOutcome outcome;
    for (std::size_t p = 0; p < patients.size(); ++p) {
        for (std::size_t i = 0; i < patients[p].size(); ++i) {
            ClassificationResult r;
            r.ic_id = patients[p][i].ic_id;
            r.patient_id = patients[p][i].patient_id;
            r.final_label = static_cast<Label>(cache.sll_preds[p][i]);
            outcome.results.push_back(std::move(r));
            outcome.truth.push_back(patients[p][i].truth.value());
            outcome.patient_of.push_back(patients[p][i].patient_id);
        }
    }
    outcome.ic_metrics = compute_metrics(outcome.results, outcome.truth, MetricLevel::IC);
    outcome.patient_metrics =
        compute_metrics(outcome.results, outcome.truth, MetricLevel::PATIENT, outcome.patient_of);
    return outcome;
}

MetricsReport compute_metrics(const std::vector<ClassificationResult>& results,
                              const std::vector<Label>& truth, MetricLevel level,
                              const std::vector<std::string>& patient_of) {
    if (results.size() != truth.size()) throw ArgumentError("compute_metrics: size mismatch");
    MetricsReport m;
    m.level = level;
    long correct = 0;

    if (level == MetricLevel::IC) {
        m.n = static_cast<long>(results.size());
        for (std::size_t i = 0; i < results.size(); ++i) {
            const bool pred_soz = results[i].final_label == Label::SOZ;
            const bool true_soz = truth[i] == Label::SOZ;
            if (results[i].final_label == truth[i]) ++correct;
            if (pred_soz && true_soz) ++m.tp;
            else if (pred_soz) ++m.fp;
            else if (true_soz) ++m.fn;
            else ++m.tn;
        }
    } else {
        if (patient_of.size() != results.size()) {
            throw ArgumentError("compute_metrics: patient ids required at the patient level");
        }
        struct Agg {
            bool any_hit = false, any_pred = false, any_true = false;
        };
        std::map<std::string, Agg> agg;
        for (std::size_t i = 0; i < results.size(); ++i) {
            Agg& a = agg[patient_of[i]];
            const bool pred_soz = results[i].final_label == Label::SOZ;
            const bool true_soz = truth[i] == Label::SOZ;
            a.any_pred |= pred_soz;
            a.any_true |= true_soz;
            a.any_hit |= pred_soz && true_soz;
        }
        m.n = static_cast<long>(agg.size());
        for (const auto& [id, a] : agg) {
            if (a.any_hit) ++m.tp;
            else if (a.any_pred) ++m.fp;
            else if (a.any_true) ++m.fn;
            else ++m.tn;
            if (a.any_hit || (!a.any_pred && !a.any_true)) ++correct;
        }
    }

    if (m.n > 0) m.accuracy = static_cast<double>(correct) / m.n;
    if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    if (m.tp + m.fn > 0) m.sensitivity = static_cast<double>(m.tp) / (m.tp + m.fn);
    if (m.precision && m.sensitivity) {
        const double s = *m.precision + *m.sensitivity;
        m.f1 = s > 0 ? 2.0 * *m.precision * *m.sensitivity / s : 0.0;
    }
    return m;
}

std::vector<AblationRow> ablation_study(const std::vector<std::vector<PreprocessedIC>>& patients,
                                        const GateCache& cache, const PipelineConfig& cfg) {
    std::vector<AblationRow> rows;
    const EvalOutcome full = run_eki_loocv(patients, cache, cfg);
    const double full_f1 = full.patient_metrics.f1.value_or(0.0);
    rows.push_back({"none", full.ic_metrics, full.patient_metrics, 0.0});
    for (int f = 0; f < 4; ++f) {
        const EvalOutcome ablated = run_eki_loocv(patients, cache, cfg, f);
        rows.push_back({kFeatureNames[f], ablated.ic_metrics, ablated.patient_metrics,
                        ablated.patient_metrics.f1.value_or(0.0) - full_f1});
    }
    return rows;
}

std::vector<MetricsReport> grouped_patient_metrics(const EvalOutcome& outcome,
                                                   const std::vector<PatientRecord>& patients,
                                                   const std::string& group_by) {
    std::map<std::string, std::string> group_of;
    for (const auto& p : patients) {
        if (group_by == "sex") {
            group_of[p.patient_id] = p.sex == Sex::M ? "M" : "F";
        } else if (group_by == "age") {
            if (p.age_years < 5) group_of[p.patient_id] = "age_0_5";
            else if (p.age_years < 13) group_of[p.patient_id] = "age_5_13";
            else group_of[p.patient_id] = "age_13_18";
        } else {
            throw ArgumentError("grouped metrics: group must be 'age' or 'sex'");
        }
    }
    std::set<std::string> groups;
    for (const auto& [id, g] : group_of) groups.insert(g);

    std::vector<MetricsReport> out;
    for (const std::string& g : groups) {
        std::vector<ClassificationResult> results;
        std::vector<Label> truth;
        std::vector<std::string> pid;
        for (std::size_t i = 0; i < outcome.results.size(); ++i) {
            const auto it = group_of.find(outcome.patient_of[i]);
            if (it == group_of.end() || it->second != g) continue;
            results.push_back(outcome.results[i]);
            truth.push_back(outcome.truth[i]);
            pid.push_back(outcome.patient_of[i]);
        }
        if (results.empty()) continue;
        MetricsReport m = compute_metrics(results, truth, MetricLevel::PATIENT, pid);
        m.group = g;
        out.push_back(std::move(m));
    }
    return out;
}

json result_to_json(const ClassificationResult& r) {
    json doc;
    doc["ic_id"] = r.ic_id;
    doc["patient_id"] = r.patient_id;
    doc["dl_label"] = to_string(r.dl_label);
    doc["dl_prob"] = r.dl_prob;
    doc["eki_label"] = to_string(r.eki);
    doc["rho"] = r.rho;
    doc["final_label"] = to_string(r.final_label);
    if (r.explanation) {
        doc["explanation"] = {{"feature", r.explanation->feature},
                              {"contribution", r.explanation->contribution}};
    } else {
        doc["explanation"] = nullptr;
    }
    if (r.soz_cluster) {
        doc["soz_cluster"] = {{"slice_index", r.soz_cluster->slice_index},
                              {"size_px", r.soz_cluster->size},
                              {"centroid_row", r.soz_cluster->centroid_row},
                              {"centroid_col", r.soz_cluster->centroid_col}};
    } else {
        doc["soz_cluster"] = nullptr;
    }
    if (r.final_label == Label::SOZ) doc["unlocalized"] = r.unlocalized;
    return doc;
}

json metrics_to_json(const MetricsReport& m) {
    json doc;
    doc["level"] = m.level == MetricLevel::IC ? "IC" : "PATIENT";
    if (!m.group.empty()) doc["group"] = m.group;
    doc["n"] = m.n;
    doc["tp"] = m.tp;
    doc["fp"] = m.fp;
    doc["fn"] = m.fn;
    doc["tn"] = m.tn;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) doc[key] = *v;
        else doc[key] = nullptr;
    };
    put("accuracy", m.accuracy);
    put("precision", m.precision);
    put("sensitivity", m.sensitivity);
    put("f1", m.f1);
    return doc;
}

json outcome_to_json(const EvalOutcome& outcome, const PipelineConfig& cfg) {
    json doc;
    doc["format_version"] = 1;
    doc["config"] = pipeline_config_to_json(cfg);
    doc["metrics"] = {{"ic_level", metrics_to_json(outcome.ic_metrics)},
                      {"patient_level", metrics_to_json(outcome.patient_metrics)}};
    json results = json::array();
    for (const auto& r : outcome.results) results.push_back(result_to_json(r));
    doc["results"] = results;
    json summary = json::array();
    std::map<std::string, std::vector<std::string>> per_patient;
    for (const auto& r : outcome.results) {
        if (r.final_label == Label::SOZ) per_patient[r.patient_id].push_back(r.ic_id);
        else per_patient.try_emplace(r.patient_id);
    }
    for (const auto& [pid, soz_ics] : per_patient) {
        summary.push_back({{"patient_id", pid}, {"soz_ic_ids", soz_ics}});
    }
    doc["patient_summary"] = summary;
    return doc;
}

}  // namespace sozloc
