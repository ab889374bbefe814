#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sozloc/image.hpp"

namespace sozloc {

enum class Label { NOISE, RSN, SOZ };
enum class BinaryLabel { NOISE, NOT_NOISE };
enum class Sex { M, F };

std::string to_string(Label l);
std::string to_string(BinaryLabel l);
Label parse_label(const std::string& s);

// RSN and SOZ collapse to NOT_NOISE; NOISE stays.
BinaryLabel to_binary(Label l);

struct ICRecord {
    std::string ic_id;
    std::string patient_id;
    Image image;
    std::vector<double> timecourse;
    std::optional<Label> label;
    std::optional<BinaryLabel> binary_label;  // set by relabel_binary
};

struct PatientRecord {
    std::string patient_id;
    double age_years = 0.0;
    Sex sex = Sex::M;
    std::vector<ICRecord> ics;
};

struct Dataset {
    std::vector<PatientRecord> patients;
    double tr_seconds = 2.0;
    std::optional<std::pair<int, int>> montage_layout;  // (rows, cols) grid hint

    std::size_t total_ics() const;
    // counts indexed by Label enum order: NOISE, RSN, SOZ
    std::array<std::size_t, 3> class_counts() const;
};

// Manifest entry paths, resolved against the manifest's directory.
struct ManifestICEntry {
    std::string ic_id;
    std::string image_path;
    std::string timecourse_path;
    std::optional<Label> label;
};

struct ManifestPatientEntry {
    std::string patient_id;
    double age_years = 0.0;
    Sex sex = Sex::M;
    std::vector<ManifestICEntry> ics;
};

// Parsed manifest with file references but no pixel/timecourse data.
// Used for streaming large datasets one patient at a time.
struct ManifestIndex {
    std::vector<ManifestPatientEntry> patients;
    double tr_seconds = 2.0;
    std::optional<std::pair<int, int>> montage_layout;
};

ManifestIndex load_manifest_index(const std::string& manifest_path);
PatientRecord load_patient(const ManifestIndex& index, std::size_t patient_idx);

// Loads everything. Deterministic ordering by (patient_id, ic_id).
Dataset load_manifest(const std::string& manifest_path);

// Writes PNGs, timecourse files and manifest.json under dir.
// Returns the manifest path.
std::string save_dataset(const Dataset& ds, const std::string& dir);

// Maps every label through to_binary into binary_label, keeping originals.
// Idempotent. Throws ArgumentError on any unlabeled IC.
Dataset relabel_binary(Dataset ds);

std::vector<double> read_timecourse(const std::string& path);
void write_timecourse(const std::string& path, const std::vector<double>& samples);

}  // namespace sozloc
