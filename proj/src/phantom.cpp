#include "sozloc/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "sozloc/errors.hpp"
#include "sozloc/slices.hpp"

namespace sozloc {

namespace {

constexpr double kActR = 250.0, kActG = 120.0, kActB = 60.0;
constexpr double kDominanceDelta = 40.0;
// alpha at the nominal blob radius; chosen so the red-dominant footprint
// extends moderately past it
constexpr double kEdgeAlpha = 0.45;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub) {
    return std::mt19937_64(splitmix64(splitmix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL)) ^ sub));
}

double dist_point_segment(double pr, double pc, double ar, double ac, double br, double bc) {
    const double dr = br - ar, dc = bc - ac;
    const double len2 = dr * dr + dc * dc;
    double t = len2 > 0 ? ((pr - ar) * dr + (pc - ac) * dc) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double qr = ar + t * dr, qc = ac + t * dc;
    return std::hypot(pr - qr, pc - qc);
}

double blob_alpha(const BlobPlan& blob, double r, double c) {
    double d;
    switch (blob.kind) {
        case BlobKind::Disc:
            d = std::hypot(r - blob.cr, c - blob.cc);
            break;
        case BlobKind::Capsule:
            d = dist_point_segment(r, c, blob.er0, blob.ec0, blob.er1, blob.ec1);
            break;
        case BlobKind::Arc: {
            d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < blob.polyline.size(); ++i) {
                d = std::min(d, dist_point_segment(r, c, blob.polyline[i].first, blob.polyline[i].second,
                                                   blob.polyline[i + 1].first, blob.polyline[i + 1].second));
            }
            break;
        }
        default:
            d = std::numeric_limits<double>::infinity();
    }
    const double sigma = blob.r / std::sqrt(2.0 * std::log(1.0 / kEdgeAlpha));
    return blob.amp * std::exp(-d * d / (2.0 * sigma * sigma));
}

}  // namespace

double PhantomGeometry::radial(double r, double c) const {
    const double qr = (r - center_r) / brain_a;
    const double qc = (c - center_c) / brain_b;
    return std::sqrt(qr * qr + qc * qc);
}

PhantomGeometry phantom_geometry(const PhantomSpec& spec) {
    PhantomGeometry g;
    g.center_r = spec.slice_h / 2.0 - 0.5;
    g.center_c = spec.slice_w / 2.0 - 0.5;
    g.brain_a = spec.slice_h / 2.0 - 2.0;
    g.brain_b = spec.slice_w / 2.0 - 2.0;
    return g;
}

void validate_phantom_spec(const PhantomSpec& spec) {
    if (spec.n_patients < 1) throw ArgumentError("phantom: need at least one patient");
    if (spec.ics_per_patient < 3) throw ArgumentError("phantom: need at least 3 ICs per patient");
    const double sum = spec.p_noise + spec.p_rsn + spec.p_soz;
    if (spec.p_noise < 0 || spec.p_rsn < 0 || spec.p_soz < 0 || std::abs(sum - 1.0) > 1e-9) {
        throw ArgumentError("phantom: class probabilities must be nonnegative and sum to 1");
    }
    if (spec.p_soz <= 0.0) {
        throw ArgumentError("phantom: p_soz must be positive (every patient receives at least one SOZ IC)");
    }
    if (spec.montage_rows < 1 || spec.montage_cols < 1 || spec.montage_rows * spec.montage_cols < 3) {
        throw ArgumentError("phantom: montage must hold at least 3 slices");
    }
    if (spec.slice_h < 80 || spec.slice_w < 80) {
        throw ArgumentError("phantom: slices below 80x80 cannot hold the class blob geometry");
    }
    if (spec.timecourse_len < 2) throw ArgumentError("phantom: timecourse too short");
    if (!(spec.tr_seconds > 0)) throw ArgumentError("phantom: TR must be positive");
}

Image render_phantom_montage(const PhantomSpec& spec, const std::vector<BlobPlan>& plan,
                             bool with_activation) {
    const PhantomGeometry g = phantom_geometry(spec);
    const int n_slices = spec.montage_rows * spec.montage_cols;
    Image montage(spec.montage_rows * spec.slice_h, spec.montage_cols * spec.slice_w);

    std::vector<double> alpha(static_cast<std::size_t>(spec.slice_h) * spec.slice_w);
    for (int s = 0; s < n_slices; ++s) {
        const bool basal = is_basal(s, n_slices, true);
        const int row0 = (s / spec.montage_cols) * spec.slice_h;
        const int col0 = (s % spec.montage_cols) * spec.slice_w;

        std::fill(alpha.begin(), alpha.end(), 0.0);
        if (with_activation) {
            for (const auto& blob : plan) {
                if (blob.slice_index != s) continue;
                for (int r = 0; r < spec.slice_h; ++r) {
                    for (int c = 0; c < spec.slice_w; ++c) {
                        const double a = blob_alpha(blob, r, c);
                        if (a > 0.02) {
                            auto& cell = alpha[static_cast<std::size_t>(r) * spec.slice_w + c];
                            cell = std::max(cell, a);
                        }
                    }
                }
            }
        }

        for (int r = 0; r < spec.slice_h; ++r) {
            for (int c = 0; c < spec.slice_w; ++c) {
                double v = g.background;
                const double q = g.radial(r, c);
                if (q <= 1.0) {
                    if (g.in_cavity(r, c) || (basal && g.in_channel(r, c))) {
                        v = g.cavity;
                    } else if (q >= g.ring_inner_frac && q <= g.ring_outer_frac) {
                        v = g.white_ring;
                    } else {
                        v = g.gray_matter;
                    }
                }
                const double a = alpha[static_cast<std::size_t>(r) * spec.slice_w + c];
                double red = v, green = v, blue = v;
                if (a > 0.0) {
                    red += a * (kActR - v);
                    green += a * (kActG - v);
                    blue += a * (kActB - v);
                }
                montage.at(row0 + r, col0 + c, 0) =
                    static_cast<std::uint8_t>(std::lround(std::clamp(red, 0.0, 255.0)));
                montage.at(row0 + r, col0 + c, 1) =
                    static_cast<std::uint8_t>(std::lround(std::clamp(green, 0.0, 255.0)));
                montage.at(row0 + r, col0 + c, 2) =
                    static_cast<std::uint8_t>(std::lround(std::clamp(blue, 0.0, 255.0)));
            }
        }
    }
    return montage;
}

namespace {

// Measures the red-dominant connected components per slice on the final image.
std::vector<PhantomBlob> measure_blobs(const Image& montage, const PhantomSpec& spec) {
    std::vector<PhantomBlob> blobs;
    const int n_slices = spec.montage_rows * spec.montage_cols;
    std::vector<int> comp(static_cast<std::size_t>(spec.slice_h) * spec.slice_w);
    for (int s = 0; s < n_slices; ++s) {
        const int row0 = (s / spec.montage_cols) * spec.slice_h;
        const int col0 = (s % spec.montage_cols) * spec.slice_w;
        std::fill(comp.begin(), comp.end(), -1);
        auto dominant = [&](int r, int c) {
            const double red = montage.at(row0 + r, col0 + c, 0);
            return red > montage.at(row0 + r, col0 + c, 1) + kDominanceDelta &&
                   red > montage.at(row0 + r, col0 + c, 2) + kDominanceDelta;
        };
        std::deque<std::pair<int, int>> queue;
        for (int r = 0; r < spec.slice_h; ++r) {
            for (int c = 0; c < spec.slice_w; ++c) {
                if (!dominant(r, c) || comp[static_cast<std::size_t>(r) * spec.slice_w + c] >= 0) continue;
                PhantomBlob blob;
                blob.slice_index = s;
                blob.r0 = r;
                blob.c0 = c;
                blob.r1 = r + 1;
                blob.c1 = c + 1;
                comp[static_cast<std::size_t>(r) * spec.slice_w + c] = 1;
                queue.push_back({r, c});
                double sum_r = 0, sum_c = 0;
                while (!queue.empty()) {
                    auto [pr, pc] = queue.front();
                    queue.pop_front();
                    blob.size_px++;
                    sum_r += pr;
                    sum_c += pc;
                    blob.r0 = std::min(blob.r0, pr);
                    blob.c0 = std::min(blob.c0, pc);
                    blob.r1 = std::max(blob.r1, pr + 1);
                    blob.c1 = std::max(blob.c1, pc + 1);
                    for (int dr = -1; dr <= 1; ++dr) {
                        for (int dc = -1; dc <= 1; ++dc) {
                            const int nr = pr + dr, nc = pc + dc;
                            if (nr < 0 || nr >= spec.slice_h || nc < 0 || nc >= spec.slice_w) continue;
                            auto& m = comp[static_cast<std::size_t>(nr) * spec.slice_w + nc];
                            if (m >= 0 || !dominant(nr, nc)) continue;
                            m = 1;
                            queue.push_back({nr, nc});
                        }
                    }
                }
                blob.centroid_row = sum_r / blob.size_px;
                blob.centroid_col = sum_c / blob.size_px;
                blobs.push_back(blob);
            }
        }
    }
    return blobs;
}

std::vector<BlobPlan> plan_rsn(std::mt19937_64& rng, const PhantomSpec& spec, const PhantomGeometry& g) {
    const int n_slices = spec.montage_rows * spec.montage_cols;
    std::uniform_int_distribution<int> n_active_dist(3, 5);
    const int n_active = std::min(n_active_dist(rng), n_slices);
    std::vector<int> all(n_slices);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> active(all.begin(), all.begin() + n_active);
    std::sort(active.begin(), active.end());

    const double cavity_px = g.cavity_frac * std::min(g.brain_a, g.brain_b);
    const double brain_px = std::min(g.brain_a, g.brain_b);
    std::uniform_real_distribution<double> radius_dist(7.0, 8.5);
    std::uniform_real_distribution<double> theta_dist(-55.0, 55.0);
    const double base_radius = radius_dist(rng);
    const double base_theta = theta_dist(rng);

    std::vector<BlobPlan> plan;
    for (int s : active) {
        std::uniform_real_distribution<double> jitter(-1.0, 1.0);
        const double radius = std::clamp(base_radius + 0.3 * jitter(rng), 7.0, 8.5);
        const double theta = (base_theta + 3.0 * jitter(rng)) * std::numbers::pi / 180.0;
        const double d_lo = cavity_px + radius + 2.5;
        const double d_hi = brain_px - radius - 1.0;
        std::uniform_real_distribution<double> d_dist(d_lo, d_hi);
        const double d = d_dist(rng);
        for (int side : {+1, -1}) {
            BlobPlan blob;
            blob.kind = BlobKind::Disc;
            blob.slice_index = s;
            blob.cr = g.center_r + d * std::sin(theta);
            blob.cc = g.center_c + side * d * std::cos(theta);
            blob.r = radius;
            plan.push_back(blob);
        }
    }
    return plan;
}

std::vector<BlobPlan> plan_soz(std::mt19937_64& rng, const PhantomSpec& spec, const PhantomGeometry& g) {
    const int n_slices = spec.montage_rows * spec.montage_cols;
    const int band = (n_slices + 2) / 3;
    const int basal_start = n_slices - band;

    std::uniform_int_distribution<int> run_dist(std::min(6, band), band);
    const int run = run_dist(rng);
    std::uniform_int_distribution<int> start_dist(basal_start, n_slices - run);
    const int start = start_dist(rng);
    std::uniform_int_distribution<int> up_dist(0, 3);
    const int up = std::min(up_dist(rng), start);

    const int side = (rng() & 1) ? +1 : -1;
    std::uniform_real_distribution<double> phi_dist(-18.0, 18.0);
    std::uniform_real_distribution<double> radius_dist(5.0, 6.0);
    std::uniform_real_distribution<double> din_dist(10.0, 14.0);
    std::uniform_real_distribution<double> dout_dist(37.0, 38.5);
    const double phi = phi_dist(rng) * std::numbers::pi / 180.0;
    const double radius = radius_dist(rng);
    const double d_in = din_dist(rng);
    const double d_out = dout_dist(rng) / 46.0 * std::min(g.brain_a, g.brain_b);

    const double ur = std::sin(phi);
    const double uc = side * std::cos(phi);

    std::vector<BlobPlan> plan;
    auto add_capsule = [&](int s, double shrink) {
        BlobPlan blob;
        blob.kind = BlobKind::Capsule;
        blob.slice_index = s;
        blob.r = radius * shrink;
        blob.er0 = g.center_r + d_in * ur;
        blob.ec0 = g.center_c + d_in * uc;
        blob.er1 = g.center_r + d_out * ur;
        blob.ec1 = g.center_c + d_out * uc;
        plan.push_back(blob);
    };
    for (int s = start; s < start + run; ++s) add_capsule(s, 1.0);
    for (int k = 1; k <= up; ++k) add_capsule(start - k, std::pow(0.95, k));
    return plan;
}

std::vector<BlobPlan> plan_noise(std::mt19937_64& rng, const PhantomSpec& spec, const PhantomGeometry& g) {
    const int n_slices = spec.montage_rows * spec.montage_cols;
    std::uniform_int_distribution<int> speckle_dist(0, 3);
    std::uniform_real_distribution<double> pos_r(0.0, spec.slice_h - 1.0);
    std::uniform_real_distribution<double> pos_c(0.0, spec.slice_w - 1.0);
    std::uniform_real_distribution<double> radius_dist(2.5, 4.5);
    std::uniform_real_distribution<double> amp_dist(0.7, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<BlobPlan> plan;
    for (int s = 0; s < n_slices; ++s) {
        const int n_speckle = speckle_dist(rng);
        for (int k = 0; k < n_speckle; ++k) {
            BlobPlan blob;
            blob.kind = BlobKind::Disc;
            blob.slice_index = s;
            blob.cr = pos_r(rng);
            blob.cc = pos_c(rng);
            blob.r = radius_dist(rng);
            blob.amp = amp_dist(rng);
            plan.push_back(blob);
        }
        if (uni(rng) < 0.3) {
            // boundary artifact arc straddling the brain edge
            std::uniform_real_distribution<double> theta0_dist(0.0, 360.0);
            std::uniform_real_distribution<double> span_dist(25.0, 70.0);
            std::uniform_real_distribution<double> hw_dist(1.5, 2.5);
            std::uniform_real_distribution<double> rho_dist(0.97, 1.03);
            BlobPlan blob;
            blob.kind = BlobKind::Arc;
            blob.slice_index = s;
            blob.r = hw_dist(rng);
            blob.amp = amp_dist(rng);
            const double theta0 = theta0_dist(rng) * std::numbers::pi / 180.0;
            const double span = span_dist(rng) * std::numbers::pi / 180.0;
            const double rho = rho_dist(rng);
            const int steps = std::max(4, static_cast<int>(span / 0.05));
            for (int i = 0; i <= steps; ++i) {
                const double t = theta0 + span * i / steps;
                blob.polyline.push_back({g.center_r + rho * g.brain_a * std::sin(t),
                                         g.center_c + rho * g.brain_b * std::cos(t)});
            }
            plan.push_back(blob);
        }
    }
    return plan;
}

std::vector<double> synth_timecourse(std::mt19937_64& rng, Label label, const PhantomSpec& spec) {
    const int n = spec.timecourse_len;
    const double tr = spec.tr_seconds;
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> x(n, 0.0);

    if (label == Label::RSN) {
        const double amp = 0.8 + 0.4 * uni(rng);
        const double f1 = 0.025 + 0.055 * uni(rng);
        const double f2 = 0.012 + 0.083 * uni(rng);
        const double p1 = 2 * std::numbers::pi * uni(rng);
        const double p2 = 2 * std::numbers::pi * uni(rng);
        for (int t = 0; t < n; ++t) {
            x[t] = amp * std::sin(2 * std::numbers::pi * f1 * t * tr + p1) +
                   0.35 * amp * std::sin(2 * std::numbers::pi * f2 * t * tr + p2) +
                   0.12 * amp * gauss(rng);
        }
    } else if (label == Label::SOZ) {
        std::uniform_int_distribution<int> k_dist(2, 4);
        const int k = k_dist(rng);
        for (int b = 0; b < k; ++b) {
            const double center = 20 + (n - 40) * uni(rng);
            const double width = 15 + 15 * uni(rng);
            const double amp = 1.5 + 1.0 * uni(rng);
            const double freq = 0.03 + 0.06 * uni(rng);
            const double phase = 2 * std::numbers::pi * uni(rng);
            for (int t = 0; t < n; ++t) {
                const double env = std::exp(-(t - center) * (t - center) / (2 * width * width));
                x[t] += amp * env * std::sin(2 * std::numbers::pi * freq * t * tr + phase);
            }
        }
        for (int t = 0; t < n; ++t) x[t] += 0.08 * gauss(rng);
    } else {
        const double f = 0.11 + 0.09 * uni(rng);
        const double p = 2 * std::numbers::pi * uni(rng);
        const double drift = (uni(rng) - 0.5) * 0.004;
        for (int t = 0; t < n; ++t) {
            x[t] = gauss(rng) + 0.3 * std::sin(2 * std::numbers::pi * f * t * tr + p) + drift * t;
        }
    }
    return x;
}

std::vector<Label> assign_labels(std::mt19937_64& rng, const PhantomSpec& spec) {
    const int n = spec.ics_per_patient;
    std::binomial_distribution<int> soz_dist(n, spec.p_soz);
    int n_soz = std::max(1, soz_dist(rng));
    n_soz = std::min(n_soz, n - 2);
    const double p_rsn_rest = spec.p_rsn / (spec.p_rsn + spec.p_noise);
    std::binomial_distribution<int> rsn_dist(n - n_soz, p_rsn_rest);
    int n_rsn = rsn_dist(rng);
    n_rsn = std::clamp(n_rsn, 1, n - n_soz - 1);

    std::vector<Label> labels;
    labels.insert(labels.end(), n_soz, Label::SOZ);
    labels.insert(labels.end(), n_rsn, Label::RSN);
    labels.insert(labels.end(), n - n_soz - n_rsn, Label::NOISE);
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

}  // namespace

PhantomPatient generate_phantom_patient(const PhantomSpec& spec, int patient_index) {
    validate_phantom_spec(spec);
    const PhantomGeometry g = phantom_geometry(spec);

    PhantomPatient patient;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%03d", patient_index);
    patient.record.patient_id = buf;

    auto meta_rng = make_engine(spec.seed, 1, static_cast<std::uint64_t>(patient_index));
    std::uniform_real_distribution<double> age_dist(0.3, 18.0);
    patient.record.age_years = age_dist(meta_rng);
    patient.record.sex = (meta_rng() & 1) ? Sex::F : Sex::M;
    const std::vector<Label> labels = assign_labels(meta_rng, spec);

    for (int i = 0; i < spec.ics_per_patient; ++i) {
        auto rng = make_engine(spec.seed, 2 + static_cast<std::uint64_t>(patient_index),
                               static_cast<std::uint64_t>(i));
        const Label label = labels[i];

        PhantomICTruth truth;
        truth.label = label;
        switch (label) {
            case Label::RSN: truth.plan = plan_rsn(rng, spec, g); break;
            case Label::SOZ: truth.plan = plan_soz(rng, spec, g); break;
            case Label::NOISE: truth.plan = plan_noise(rng, spec, g); break;
        }

        ICRecord ic;
        std::snprintf(buf, sizeof(buf), "ic%03d", i);
        ic.ic_id = buf;
        ic.patient_id = patient.record.patient_id;
        ic.image = render_phantom_montage(spec, truth.plan, true);
        ic.timecourse = synth_timecourse(rng, label, spec);
        ic.label = label;

        truth.blobs = measure_blobs(ic.image, spec);
        for (const auto& blob : truth.blobs) {
            if (truth.active_slices.empty() || truth.active_slices.back() != blob.slice_index) {
                truth.active_slices.push_back(blob.slice_index);
            }
        }

        patient.record.ics.push_back(std::move(ic));
        patient.truths.push_back(std::move(truth));
    }
    return patient;
}

PhantomDataset generate_phantom_dataset(const PhantomSpec& spec) {
    validate_phantom_spec(spec);
    PhantomDataset out;
    out.dataset.tr_seconds = spec.tr_seconds;
    out.dataset.montage_layout = {spec.montage_rows, spec.montage_cols};
    for (int p = 0; p < spec.n_patients; ++p) {
        PhantomPatient patient = generate_phantom_patient(spec, p);
        for (std::size_t i = 0; i < patient.truths.size(); ++i) {
            out.truth[patient.record.patient_id + "/" + patient.record.ics[i].ic_id] =
                std::move(patient.truths[i]);
        }
        out.dataset.patients.push_back(std::move(patient.record));
    }
    return out;
}

}  // namespace sozloc
