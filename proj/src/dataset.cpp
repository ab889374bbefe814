#include "sozloc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sozloc/errors.hpp"
#include "sozloc/io_util.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace sozloc {

std::string to_string(Label l) {
    switch (l) {
        case Label::NOISE: return "NOISE";
        case Label::RSN: return "RSN";
        case Label::SOZ: return "SOZ";
    }
    return "?";
}

std::string to_string(BinaryLabel l) {
    return l == BinaryLabel::NOISE ? "NOISE" : "NOT_NOISE";
}

Label parse_label(const std::string& s) {
    if (s == "NOISE") return Label::NOISE;
    if (s == "RSN") return Label::RSN;
    if (s == "SOZ") return Label::SOZ;
    throw DataError("unknown label '" + s + "'");
}

BinaryLabel to_binary(Label l) {
    return l == Label::NOISE ? BinaryLabel::NOISE : BinaryLabel::NOT_NOISE;
}

std::size_t Dataset::total_ics() const {
    std::size_t n = 0;
    for (const auto& p : patients) n += p.ics.size();
    return n;
}

std::array<std::size_t, 3> Dataset::class_counts() const {
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (const auto& p : patients) {
        for (const auto& ic : p.ics) {
            if (ic.label) counts[static_cast<int>(*ic.label)]++;
        }
    }
    return counts;
}

std::vector<double> read_timecourse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open timecourse file: " + path);
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
        // trim whitespace; skip blank lines
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            samples.push_back(v);
        } catch (const std::exception&) {
            throw DataError("bad sample '" + tok + "' in timecourse file: " + path);
        }
    }
    return samples;
}

void write_timecourse(const std::string& path, const std::vector<double>& samples) {
    std::ostringstream ss;
    ss.precision(17);
    for (double v : samples) ss << v << "\n";
    atomic_write_text(path, ss.str());
}

namespace {

Sex parse_sex(const std::string& s) {
    if (s == "M") return Sex::M;
    if (s == "F") return Sex::F;
    throw DataError("unknown sex '" + s + "' (expected M or F)");
}

void validate_ic(const ICRecord& ic, double tr_seconds) {
    const std::string who = "IC '" + ic.ic_id + "' of patient '" + ic.patient_id + "'";
    if (ic.image.height < 32 || ic.image.width < 32) {
        throw DataError(who + ": image must be at least 32x32, got " +
                        std::to_string(ic.image.height) + "x" + std::to_string(ic.image.width));
    }
    if (ic.timecourse.size() < 2) {
        throw DataError(who + ": timecourse must have at least 2 samples");
    }
    if (!(tr_seconds > 0)) {
        throw DataError(who + ": TR must be positive");
    }
}

}  // namespace

ManifestIndex load_manifest_index(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw DataError("cannot open manifest: " + manifest_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("malformed manifest " + manifest_path + ": " + e.what());
    }

    const fs::path base = fs::path(manifest_path).parent_path();
    ManifestIndex index;
    try {
        index.tr_seconds = doc.value("tr_seconds", 2.0);
        if (doc.contains("montage_layout") && !doc["montage_layout"].is_null()) {
            const auto& ml = doc["montage_layout"];
            index.montage_layout = {ml.at(0).get<int>(), ml.at(1).get<int>()};
        }
        for (const auto& pj : doc.at("patients")) {
            ManifestPatientEntry p;
            p.patient_id = pj.at("patient_id").get<std::string>();
            p.age_years = pj.value("age_years", 0.0);
            p.sex = parse_sex(pj.value("sex", "M"));
            if (p.age_years < 0) {
                throw DataError("patient '" + p.patient_id + "': negative age");
            }
            for (const auto& icj : pj.at("ics")) {
                ManifestICEntry e;
                e.ic_id = icj.at("ic_id").get<std::string>();
                e.image_path = (base / icj.at("image").get<std::string>()).string();
                e.timecourse_path = (base / icj.at("timecourse").get<std::string>()).string();
                if (icj.contains("label") && !icj["label"].is_null()) {
                    e.label = parse_label(icj["label"].get<std::string>());
                }
                p.ics.push_back(std::move(e));
            }
            index.patients.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw DataError("malformed manifest " + manifest_path + ": " + e.what());
    }
    if (!(index.tr_seconds > 0)) {
        throw DataError("manifest " + manifest_path + ": tr_seconds must be positive");
    }

    // deterministic order; reject duplicate patient ids
    std::sort(index.patients.begin(), index.patients.end(),
              [](const auto& a, const auto& b) { return a.patient_id < b.patient_id; });
    for (std::size_t i = 1; i < index.patients.size(); ++i) {
        if (index.patients[i].patient_id == index.patients[i - 1].patient_id) {
            throw DataError("duplicate patient id '" + index.patients[i].patient_id + "' in manifest");
        }
    }
    for (auto& p : index.patients) {
        std::sort(p.ics.begin(), p.ics.end(),
                  [](const auto& a, const auto& b) { return a.ic_id < b.ic_id; });
    }
    return index;
}

PatientRecord load_patient(const ManifestIndex& index, std::size_t patient_idx) {
    const auto& entry = index.patients.at(patient_idx);
    PatientRecord p;
    p.patient_id = entry.patient_id;
    p.age_years = entry.age_years;
    p.sex = entry.sex;
    for (const auto& e : entry.ics) {
        ICRecord ic;
        ic.ic_id = e.ic_id;
        ic.patient_id = entry.patient_id;
        if (!fs::exists(e.image_path)) {
            throw DataError("IC '" + e.ic_id + "' of patient '" + entry.patient_id +
                            "': missing image file " + e.image_path);
        }
        if (!fs::exists(e.timecourse_path)) {
            throw DataError("IC '" + e.ic_id + "' of patient '" + entry.patient_id +
                            "': missing timecourse file " + e.timecourse_path);
        }
        ic.image = read_png(e.image_path);
        ic.timecourse = read_timecourse(e.timecourse_path);
        ic.label = e.label;
        validate_ic(ic, index.tr_seconds);
        p.ics.push_back(std::move(ic));
    }
    return p;
}

Dataset load_manifest(const std::string& manifest_path) {
    const ManifestIndex index = load_manifest_index(manifest_path);
    Dataset ds;
    ds.tr_seconds = index.tr_seconds;
    ds.montage_layout = index.montage_layout;
    for (std::size_t i = 0; i < index.patients.size(); ++i) {
        ds.patients.push_back(load_patient(index, i));
    }
    return ds;
}

std::string save_dataset(const Dataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    json doc;
    doc["tr_seconds"] = ds.tr_seconds;
    if (ds.montage_layout) {
        doc["montage_layout"] = {ds.montage_layout->first, ds.montage_layout->second};
    }
    doc["patients"] = json::array();
    for (const auto& p : ds.patients) {
        json pj;
        pj["patient_id"] = p.patient_id;
        pj["age_years"] = p.age_years;
        pj["sex"] = p.sex == Sex::M ? "M" : "F";
        pj["ics"] = json::array();
        const fs::path pdir = fs::path(dir) / p.patient_id;
        fs::create_directories(pdir);
        for (const auto& ic : p.ics) {
            const std::string img_rel = p.patient_id + "/" + ic.ic_id + ".png";
            const std::string tc_rel = p.patient_id + "/" + ic.ic_id + ".txt";
            write_png((fs::path(dir) / img_rel).string(), ic.image);
            write_timecourse((fs::path(dir) / tc_rel).string(), ic.timecourse);
            json icj;
            icj["ic_id"] = ic.ic_id;
            icj["image"] = img_rel;
            icj["timecourse"] = tc_rel;
            if (ic.label) {
                icj["label"] = to_string(*ic.label);
            }
            pj["ics"].push_back(std::move(icj));
        }
        doc["patients"].push_back(std::move(pj));
    }
    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    atomic_write_text(manifest_path, doc.dump(2) + "\n");
    return manifest_path;
}

Dataset relabel_binary(Dataset ds) {
    for (auto& p : ds.patients) {
        for (auto& ic : p.ics) {
            if (!ic.label) {
                throw ArgumentError("relabel_binary: IC '" + ic.ic_id + "' of patient '" +
                                    p.patient_id + "' has no label");
            }
            ic.binary_label = to_binary(*ic.label);
        }
    }
    return ds;
}

}  // namespace sozloc
