#include "sozloc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sozloc/dataset.hpp"
#include "sozloc/errors.hpp"
#include "sozloc/eval.hpp"
#include "sozloc/io_util.hpp"
#include "sozloc/phantom.hpp"
#include "sozloc/stats.hpp"

using json = nlohmann::ordered_json;

namespace sozloc {

namespace {

constexpr const char* kVersion = "sozloc 1.0.0 (manifest v1, checkpoint v1, report v1)";

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "pipeline config JSON; flags override");
    cmd->add_option("--seed", opts.seed, "base RNG seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--threads", opts.threads, "worker threads for feature extraction");
}

PipelineConfig load_config(const CommonOpts& opts) {
    PipelineConfig cfg;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw DataError("cannot open config: " + opts.config_path);
        try {
            cfg = pipeline_config_from_json(json::parse(in));
        } catch (const json::exception& e) {
            throw DataError("malformed config " + opts.config_path + ": " + e.what());
        }
    }
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.threads > 0) cfg.threads = opts.threads;
    return cfg;
}

// keeps the manifest's grid hint and TR wired into the feature configs
void adopt_dataset_settings(PipelineConfig& cfg, const ManifestIndex& index) {
    if (index.montage_layout && !cfg.features.slices.layout) {
        cfg.features.slices.layout = index.montage_layout;
    }
    cfg.features.sparsity.tr_seconds = index.tr_seconds;
}

std::vector<std::vector<PreprocessedIC>> preprocess_manifest(const ManifestIndex& index,
                                                             const PipelineConfig& cfg) {
    std::vector<std::vector<PreprocessedIC>> out;
    for (std::size_t p = 0; p < index.patients.size(); ++p) {
        const PatientRecord patient = load_patient(index, p);
        out.push_back(preprocess_patient(patient, cfg));
        std::cerr << "preprocessed " << patient.patient_id << " (" << p + 1 << "/"
                  << index.patients.size() << ")\n";
    }
    return out;
}

std::vector<Sample> manifest_to_samples(const ManifestIndex& index, const PipelineConfig& cfg,
                                        bool binary) {
    std::vector<Sample> samples;
    for (std::size_t p = 0; p < index.patients.size(); ++p) {
        const PatientRecord patient = load_patient(index, p);
        for (const auto& ic : patient.ics) {
            if (!ic.label) {
                throw ArgumentError("training requires labels; IC '" + ic.ic_id + "' has none");
            }
            const int label = binary ? (to_binary(*ic.label) == BinaryLabel::NOT_NOISE ? 1 : 0)
                                     : static_cast<int>(*ic.label);
            samples.push_back({NoiseNet::to_chw(ic.image, cfg.net.input_h, cfg.net.input_w), label});
        }
    }
    return samples;
}

std::string format_csv_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct FeatureRow {
    std::string ic_id, patient_id;
    FeatureVector f{};
    std::optional<Label> label;
};

std::vector<FeatureRow> read_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open features file: " + path);
    std::vector<FeatureRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        FeatureRow row;
        try {
            std::getline(ss, row.ic_id, ',');
            std::getline(ss, row.patient_id, ',');
            for (int f = 0; f < 4; ++f) {
                std::getline(ss, tok, ',');
                row.f[f] = std::stod(tok);
            }
            if (std::getline(ss, tok, ',') && !tok.empty()) row.label = parse_label(tok);
        } catch (const std::exception&) {
            throw DataError("malformed features row: " + line);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_training_log(const TrainingLog& log) {
    for (const auto& e : log.epochs) {
        std::cerr << "epoch " << e.epoch << ": train_loss=" << e.train_loss
                  << " val_loss=" << e.val_loss << " val_acc=" << e.val_accuracy << "\n";
    }
    std::cerr << "best epoch: " << log.best_epoch << " (val_loss=" << log.best_val_loss << ")\n";
}

std::vector<double> read_samples_file(const std::string& path) { return read_timecourse(path); }

int cmd_phantom_generate(const std::string& spec_path, const std::string& out_dir,
                         const CommonOpts& common) {
    PhantomSpec spec;
    if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in) throw DataError("cannot open phantom spec: " + spec_path);
        try {
            const json doc = json::parse(in);
            spec.n_patients = doc.value("n_patients", spec.n_patients);
            spec.ics_per_patient = doc.value("ics_per_patient", spec.ics_per_patient);
            spec.p_noise = doc.value("p_noise", spec.p_noise);
            spec.p_rsn = doc.value("p_rsn", spec.p_rsn);
            spec.p_soz = doc.value("p_soz", spec.p_soz);
            spec.montage_rows = doc.value("montage_rows", spec.montage_rows);
            spec.montage_cols = doc.value("montage_cols", spec.montage_cols);
            spec.slice_h = doc.value("slice_h", spec.slice_h);
            spec.slice_w = doc.value("slice_w", spec.slice_w);
            spec.timecourse_len = doc.value("timecourse_len", spec.timecourse_len);
            spec.tr_seconds = doc.value("tr_seconds", spec.tr_seconds);
            spec.seed = doc.value("seed", spec.seed);
        } catch (const json::exception& e) {
            throw DataError("malformed phantom spec " + spec_path + ": " + e.what());
        }
    }
    if (common.seed_set) spec.seed = common.seed;
    validate_phantom_spec(spec);

    Dataset ds;
    ds.tr_seconds = spec.tr_seconds;
    ds.montage_layout = {spec.montage_rows, spec.montage_cols};
    json truth_doc;
    for (int p = 0; p < spec.n_patients; ++p) {
        PhantomPatient patient = generate_phantom_patient(spec, p);
        for (std::size_t i = 0; i < patient.truths.size(); ++i) {
            const auto& truth = patient.truths[i];
            json ic_truth;
            ic_truth["label"] = to_string(truth.label);
            json blobs = json::array();
            for (const auto& b : truth.blobs) {
                blobs.push_back({{"slice_index", b.slice_index},
                                 {"size_px", b.size_px},
                                 {"bbox", {b.r0, b.c0, b.r1, b.c1}},
                                 {"centroid", {b.centroid_row, b.centroid_col}}});
            }
            ic_truth["blobs"] = blobs;
            truth_doc[patient.record.patient_id + "/" + patient.record.ics[i].ic_id] = ic_truth;
        }
        ds.patients.push_back(std::move(patient.record));
        std::cerr << "generated patient " << p + 1 << "/" << spec.n_patients << "\n";
    }
    const std::string manifest = save_dataset(ds, out_dir);
    atomic_write_text(out_dir + "/truth.json", truth_doc.dump(2) + "\n");
    std::cerr << "wrote " << manifest << "\n";
    return 0;
}

int cmd_features_extract(const std::string& manifest_path, const std::string& out_path,
                         const CommonOpts& common) {
    PipelineConfig cfg = load_config(common);
    const ManifestIndex index = load_manifest_index(manifest_path);
    adopt_dataset_settings(cfg, index);

    std::ostringstream csv;
    csv << "ic_id,patient_id,f1_cluster_count,f2_wm_ventricle,f3_activelet_gini,f4_sine_gini,label\n";
    for (std::size_t p = 0; p < index.patients.size(); ++p) {
        const PatientRecord patient = load_patient(index, p);
        const auto pre = preprocess_patient(patient, cfg);
        for (const auto& ic : pre) {
            csv << ic.ic_id << "," << ic.patient_id;
            for (int f = 0; f < 4; ++f) csv << "," << format_csv_double(ic.features[f]);
            csv << "," << (ic.truth ? to_string(*ic.truth) : "") << "\n";
        }
        std::cerr << "extracted " << patient.patient_id << " (" << p + 1 << "/"
                  << index.patients.size() << ")\n";
    }
    atomic_write_text(out_path, csv.str());
    return 0;
}

int cmd_train(const std::string& manifest_path, const std::string& out_path, bool multiclass,
              const CommonOpts& common) {
    PipelineConfig cfg = load_config(common);
    const ManifestIndex index = load_manifest_index(manifest_path);
    adopt_dataset_settings(cfg, index);
    const std::vector<Sample> samples = manifest_to_samples(index, cfg, !multiclass);

    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = cfg.seed;
    TrainingLog log;
    NoiseNet net;
    if (multiclass) {
        NetworkConfig net_cfg = cfg.net;
        net_cfg.n_classes = 3;
        net = train_multiclass_baseline(samples, net_cfg, train_cfg, &log);
    } else {
        net = train_binary(samples, cfg.net, train_cfg, &log);
    }
    write_training_log(log);
    net.save(out_path);
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_fit_eki(const std::string& features_path, const std::string& out_path,
                const CommonOpts& common) {
    const PipelineConfig cfg = load_config(common);
    const std::vector<FeatureRow> rows = read_features_csv(features_path);

    std::vector<PreprocessedIC> ics;
    for (const auto& row : rows) {
        if (!row.label || *row.label == Label::NOISE) continue;
        PreprocessedIC ic;
        ic.ic_id = row.ic_id;
        ic.patient_id = row.patient_id;
        ic.truth = row.label;
        ic.features = row.f;
        ics.push_back(std::move(ic));
    }
    std::vector<const PreprocessedIC*> refs;
    for (const auto& ic : ics) refs.push_back(&ic);
    const FoldEki fold = fit_fold_eki(refs, cfg, std::nullopt, cfg.seed);
    save_eki_model(fold.model, out_path);
    std::cerr << "omega:";
    for (double w : fold.model.omega) std::cerr << " " << w;
    std::cerr << "\nwrote " << out_path << "\n";
    return 0;
}

int cmd_classify(const std::string& manifest_path, const std::string& model_path,
                 const std::string& eki_path, const std::string& out_path, const CommonOpts& common) {
    PipelineConfig cfg = load_config(common);
    const ManifestIndex index = load_manifest_index(manifest_path);
    adopt_dataset_settings(cfg, index);

    const NoiseNet gate = NoiseNet::load(model_path);
    cfg.net = gate.config();
    FoldEki fold;
    fold.model = load_eki_model(eki_path);
    for (std::size_t f = 0; f < fold.model.omega.size(); ++f) fold.active.push_back(static_cast<int>(f));

    EvalOutcome outcome;
    bool all_labeled = true;
    for (std::size_t p = 0; p < index.patients.size(); ++p) {
        const PatientRecord patient = load_patient(index, p);
        for (const auto& ic : preprocess_patient(patient, cfg)) {
            const double prob = gate.forward(ic.gate_chw)[0];
            outcome.results.push_back(
                classify_ic(ic, prob, fold, fold.model.override_threshold));
            outcome.patient_of.push_back(ic.patient_id);
            if (ic.truth) {
                outcome.truth.push_back(*ic.truth);
            } else {
                all_labeled = false;
            }
        }
        std::cerr << "classified " << patient.patient_id << " (" << p + 1 << "/"
                  << index.patients.size() << ")\n";
    }

    json doc = outcome_to_json(outcome, cfg);
    if (all_labeled && !outcome.results.empty()) {
        doc["metrics"] = {{"ic_level", metrics_to_json(compute_metrics(outcome.results, outcome.truth,
                                                                       MetricLevel::IC))},
                          {"patient_level",
                           metrics_to_json(compute_metrics(outcome.results, outcome.truth,
                                                           MetricLevel::PATIENT, outcome.patient_of))}};
    } else {
        doc.erase("metrics");
    }
    atomic_write_text(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_localize(const std::string& manifest_path, const std::string& report_path,
                 const std::string& out_path, const CommonOpts& common) {
    PipelineConfig cfg = load_config(common);
    const ManifestIndex index = load_manifest_index(manifest_path);
    adopt_dataset_settings(cfg, index);

    std::ifstream in(report_path);
    if (!in) throw DataError("cannot open report: " + report_path);
    json report;
    try {
        report = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("malformed report " + report_path + ": " + e.what());
    }
    std::set<std::string> soz_keys;
    for (const auto& r : report.at("results")) {
        if (r.at("final_label") == "SOZ") {
            soz_keys.insert(r.at("patient_id").get<std::string>() + "/" +
                            r.at("ic_id").get<std::string>());
        }
    }

    json out = json::array();
    for (std::size_t p = 0; p < index.patients.size(); ++p) {
        bool any = false;
        for (const auto& e : index.patients[p].ics) {
            if (soz_keys.contains(index.patients[p].patient_id + "/" + e.ic_id)) any = true;
        }
        if (!any) continue;
        const PatientRecord patient = load_patient(index, p);
        for (const auto& ic : preprocess_patient(patient, cfg)) {
            if (!soz_keys.contains(ic.patient_id + "/" + ic.ic_id)) continue;
            json row;
            row["patient_id"] = ic.patient_id;
            row["ic_id"] = ic.ic_id;
            const auto localized = localize_soz(ic.clusters);
            if (localized) {
                row["soz_cluster"] = {{"slice_index", localized->slice_index},
                                      {"size_px", localized->size},
                                      {"centroid_row", localized->centroid_row},
                                      {"centroid_col", localized->centroid_col}};
                row["unlocalized"] = false;
            } else {
                row["soz_cluster"] = nullptr;
                row["unlocalized"] = true;
            }
            out.push_back(std::move(row));
        }
    }
    atomic_write_text(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& out_path,
                 const std::string& ablate_feature, const std::string& group_by, bool with_sll,
                 const CommonOpts& common) {
    PipelineConfig cfg = load_config(common);
    const ManifestIndex index = load_manifest_index(manifest_path);
    adopt_dataset_settings(cfg, index);

    const auto patients = preprocess_manifest(index, cfg);
    std::cerr << "running leave-one-out over " << patients.size() << " patients\n";
    const GateCache cache = run_gate_loocv(patients, cfg, with_sll);

    std::optional<int> drop;
    if (!ablate_feature.empty()) {
        for (int f = 0; f < 4; ++f) {
            if (ablate_feature == kFeatureNames[f]) drop = f;
        }
        if (!drop) throw ArgumentError("unknown feature to ablate: " + ablate_feature);
    }
    const EvalOutcome outcome = run_eki_loocv(patients, cache, cfg, drop);

    json doc = outcome_to_json(outcome, cfg);
    if (drop) doc["ablated_feature"] = ablate_feature;
    if (!group_by.empty()) {
        std::vector<PatientRecord> metas;
        for (const auto& e : index.patients) {
            PatientRecord meta;
            meta.patient_id = e.patient_id;
            meta.age_years = e.age_years;
            meta.sex = e.sex;
            metas.push_back(std::move(meta));
        }
        json groups = json::array();
        for (const auto& m : grouped_patient_metrics(outcome, metas, group_by)) {
            groups.push_back(metrics_to_json(m));
        }
        doc["group_metrics"] = groups;
    }
    if (with_sll) {
        const EvalOutcome sll = sll_outcome(patients, cache);
        doc["sll_baseline"] = {{"ic_level", metrics_to_json(sll.ic_metrics)},
                               {"patient_level", metrics_to_json(sll.patient_metrics)}};
    }
    atomic_write_text(out_path, doc.dump(2) + "\n");
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_ablate(const std::string& manifest_path, const std::string& out_path,
               const CommonOpts& common) {
    PipelineConfig cfg = load_config(common);
    const ManifestIndex index = load_manifest_index(manifest_path);
    adopt_dataset_settings(cfg, index);

    const auto patients = preprocess_manifest(index, cfg);
    const GateCache cache = run_gate_loocv(patients, cfg, false);
    const std::vector<AblationRow> rows = ablation_study(patients, cache, cfg);

    json doc;
    doc["format_version"] = 1;
    doc["config"] = pipeline_config_to_json(cfg);
    json table = json::array();
    for (const auto& row : rows) {
        table.push_back({{"dropped", row.dropped},
                         {"ic_level", metrics_to_json(row.ic_metrics)},
                         {"patient_level", metrics_to_json(row.patient_metrics)},
                         {"delta_f1_patient", row.delta_f1_patient}});
    }
    doc["ablations"] = table;
    atomic_write_text(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_stats(const std::string& test, const std::string& input, const std::string& a_path,
              const std::string& b_path, const std::string& out_path) {
    TestResult result;
    if (test == "ks") {
        if (input.empty()) throw ArgumentError("stats ks requires --input");
        result = ks_normality_test(read_samples_file(input));
    } else if (test == "welch") {
        if (a_path.empty() || b_path.empty()) throw ArgumentError("stats welch requires --a and --b");
        result = welch_one_sided_t(read_samples_file(a_path), read_samples_file(b_path));
    } else {
        throw ArgumentError("unknown test: " + test + " (expected ks or welch)");
    }
    json doc;
    doc["test"] = test;
    doc["statistic"] = result.statistic;
    doc["p_value"] = result.p_value;
    doc["degenerate"] = result.degenerate;
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        atomic_write_text(out_path, doc.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Resting-state IC sorting and seizure-onset-zone localization"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts common;

    // phantom generate
    auto* phantom = app.add_subcommand("phantom", "synthetic dataset tools");
    phantom->require_subcommand(1);
    auto* phantom_gen = phantom->add_subcommand("generate", "write a phantom dataset");
    std::string spec_path, out_dir;
    phantom_gen->add_option("--spec", spec_path, "phantom spec JSON");
    phantom_gen->add_option("--out", out_dir, "output directory")->required();
    add_common(phantom_gen, common);

    // features extract
    auto* features = app.add_subcommand("features", "expert feature tools");
    features->require_subcommand(1);
    auto* features_extract = features->add_subcommand("extract", "write per-IC features CSV");
    std::string manifest_path, out_path;
    features_extract->add_option("--manifest", manifest_path, "dataset manifest")->required();
    features_extract->add_option("--out", out_path, "output CSV path")->required();
    add_common(features_extract, common);

    auto* train_noise = app.add_subcommand("train-noise", "train the binary noise gate");
    std::string tn_manifest, tn_out;
    train_noise->add_option("--manifest", tn_manifest, "dataset manifest")->required();
    train_noise->add_option("--out", tn_out, "model checkpoint path")->required();
    add_common(train_noise, common);

    auto* train_sll = app.add_subcommand("train-sll", "train the 3-class cost-sensitive baseline");
    std::string ts_manifest, ts_out;
    train_sll->add_option("--manifest", ts_manifest, "dataset manifest")->required();
    train_sll->add_option("--out", ts_out, "model checkpoint path")->required();
    add_common(train_sll, common);

    auto* fit_eki = app.add_subcommand("fit-eki", "fit the expert-knowledge model from features");
    std::string fe_features, fe_out;
    fit_eki->add_option("--features", fe_features, "features CSV from 'features extract'")->required();
    fit_eki->add_option("--out", fe_out, "EKI model JSON path")->required();
    add_common(fit_eki, common);

    auto* classify = app.add_subcommand("classify", "classify a dataset with trained models");
    std::string cl_manifest, cl_model, cl_eki, cl_out;
    classify->add_option("--manifest", cl_manifest, "dataset manifest")->required();
    classify->add_option("--dl", cl_model, "noise gate checkpoint")->required();
    classify->add_option("--eki", cl_eki, "EKI model JSON")->required();
    classify->add_option("--out", cl_out, "report JSON path")->required();
    add_common(classify, common);

    auto* localize = app.add_subcommand("localize", "largest-cluster localization for SOZ ICs");
    std::string lo_manifest, lo_report, lo_out;
    localize->add_option("--manifest", lo_manifest, "dataset manifest")->required();
    localize->add_option("--report", lo_report, "classification report JSON")->required();
    localize->add_option("--out", lo_out, "localization JSON path")->required();
    add_common(localize, common);

    auto* evaluate = app.add_subcommand("evaluate", "leave-one-out evaluation");
    std::string ev_manifest, ev_out, ev_ablate, ev_group;
    bool ev_with_sll = false;
    evaluate->add_option("--manifest", ev_manifest, "dataset manifest")->required();
    evaluate->add_option("--out", ev_out, "report JSON path")->required();
    evaluate->add_option("--ablate", ev_ablate, "drop one expert feature");
    evaluate->add_option("--group", ev_group, "metric breakdown: age or sex");
    evaluate->add_flag("--with-sll", ev_with_sll, "also run the 3-class baseline");
    add_common(evaluate, common);

    auto* ablate = app.add_subcommand("ablate", "full knowledge-ablation table");
    std::string ab_manifest, ab_out;
    ablate->add_option("--manifest", ab_manifest, "dataset manifest")->required();
    ablate->add_option("--out", ab_out, "table JSON path")->required();
    add_common(ablate, common);

    auto* stats = app.add_subcommand("stats", "statistical tests");
    std::string st_test, st_input, st_a, st_b, st_out;
    stats->add_option("test", st_test, "ks or welch")->required();
    stats->add_option("--input", st_input, "samples file (one value per line)");
    stats->add_option("--a", st_a, "first sample file");
    stats->add_option("--b", st_b, "second sample file");
    stats->add_option("--out", st_out, "result JSON path (stdout when omitted)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    if (!argv_rev.empty()) argv_rev.pop_back();  // drop program name

    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (phantom_gen->parsed()) return cmd_phantom_generate(spec_path, out_dir, common);
        if (features_extract->parsed()) return cmd_features_extract(manifest_path, out_path, common);
        if (train_noise->parsed()) return cmd_train(tn_manifest, tn_out, false, common);
        if (train_sll->parsed()) return cmd_train(ts_manifest, ts_out, true, common);
        if (fit_eki->parsed()) return cmd_fit_eki(fe_features, fe_out, common);
        if (classify->parsed()) return cmd_classify(cl_manifest, cl_model, cl_eki, cl_out, common);
        if (localize->parsed()) return cmd_localize(lo_manifest, lo_report, lo_out, common);
        if (evaluate->parsed()) {
            return cmd_evaluate(ev_manifest, ev_out, ev_ablate, ev_group, ev_with_sll, common);
        }
        if (ablate->parsed()) return cmd_ablate(ab_manifest, ab_out, common);
        if (stats->parsed()) return cmd_stats(st_test, st_input, st_a, st_b, st_out);
        std::cerr << app.help();
        return 1;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sozloc
