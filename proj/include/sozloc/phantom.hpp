#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sozloc/dataset.hpp"

namespace sozloc {

struct PhantomSpec {
    int n_patients = 52;
    int ics_per_patient = 40;
    double p_noise = 0.511;
    double p_rsn = 0.433;
    double p_soz = 0.056;
    int montage_rows = 5;
    int montage_cols = 6;
    int slice_h = 96;
    int slice_w = 96;
    int timecourse_len = 512;
    double tr_seconds = 2.0;
    std::uint64_t seed = 42;
};

// Slice-local geometry derived from the spec. The brain is an ellipse of
// mid-gray tissue with a bright white-matter ring and a dark central cavity;
// basal slices open the cavity to the boundary through a dark channel.
struct PhantomGeometry {
    double center_r = 0.0;
    double center_c = 0.0;
    double brain_a = 0.0;  // row semi-axis
    double brain_b = 0.0;  // col semi-axis
    double cavity_frac = 0.48;
    double ring_inner_frac = 0.56;
    double ring_outer_frac = 0.64;
    double channel_halfwidth = 5.0;
    // luminances
    double background = 10.0;
    double cavity = 35.0;
    double gray_matter = 120.0;
    double white_ring = 205.0;

    // normalized elliptical radius of a pixel center
    double radial(double r, double c) const;
    bool in_brain(double r, double c) const { return radial(r, c) <= 1.0; }
    bool in_cavity(double r, double c) const { return radial(r, c) <= cavity_frac; }
    bool in_ring(double r, double c) const {
        const double q = radial(r, c);
        return q >= ring_inner_frac && q <= ring_outer_frac;
    }
    bool in_channel(double r, double c) const {
        return std::abs(c - center_c) <= channel_halfwidth && r <= center_r;
    }
    // the rendered dark ventricle region of a slice
    bool in_ventricle(double r, double c, bool basal) const {
        if (!in_brain(r, c)) return false;
        return in_cavity(r, c) || (basal && in_channel(r, c));
    }
};

PhantomGeometry phantom_geometry(const PhantomSpec& spec);

enum class BlobKind { Disc, Capsule, Arc };

// One rendered activation element on one slice.
struct BlobPlan {
    BlobKind kind = BlobKind::Disc;
    int slice_index = 0;
    double cr = 0.0, cc = 0.0;  // disc center, slice coords
    double r = 0.0;             // profile radius
    double amp = 1.0;
    double er0 = 0.0, ec0 = 0.0, er1 = 0.0, ec1 = 0.0;  // capsule endpoints
    std::vector<std::pair<double, double>> polyline;    // arc centerline
};

// Connected red-dominant component measured on the final rendered montage.
struct PhantomBlob {
    int slice_index = 0;
    long size_px = 0;
    int r0 = 0, c0 = 0, r1 = 0, c1 = 0;  // slice-local bbox, half-open
    double centroid_row = 0.0;
    double centroid_col = 0.0;
};

struct PhantomICTruth {
    Label label = Label::NOISE;
    std::vector<BlobPlan> plan;
    std::vector<PhantomBlob> blobs;
    std::vector<int> active_slices;
};

struct PhantomPatient {
    PatientRecord record;
    std::vector<PhantomICTruth> truths;  // parallel to record.ics
};

struct PhantomDataset {
    Dataset dataset;
    // keyed by "<patient_id>/<ic_id>"
    std::map<std::string, PhantomICTruth> truth;
};

// Deterministic per (spec.seed, patient_index); patients are independent.
PhantomPatient generate_phantom_patient(const PhantomSpec& spec, int patient_index);

PhantomDataset generate_phantom_dataset(const PhantomSpec& spec);

// Re-renders a montage from a stored plan. with_activation=false gives the
// activation-free variant of the same IC.
Image render_phantom_montage(const PhantomSpec& spec, const std::vector<BlobPlan>& plan,
                             bool with_activation);

void validate_phantom_spec(const PhantomSpec& spec);

}  // namespace sozloc
