#include <doctest.h>

#include <random>

#include "sozloc/dataset.hpp"
#include "sozloc/errors.hpp"
#include "sozloc/image.hpp"
#include "sozloc/io_util.hpp"
#include "test_util.hpp"

using namespace sozloc;

namespace {

Image random_image(int h, int w, std::uint64_t seed) {
    Image img(h, w);
    std::mt19937_64 rng(seed);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

Dataset tiny_dataset(int n_patients = 2, int n_ics = 3) {
    Dataset ds;
    ds.tr_seconds = 2.0;
    ds.montage_layout = {{1, 1}};
    for (int p = 0; p < n_patients; ++p) {
        PatientRecord patient;
        patient.patient_id = "p" + std::to_string(p);
        patient.age_years = 4.0 + p;
        patient.sex = p % 2 ? Sex::F : Sex::M;
        for (int i = 0; i < n_ics; ++i) {
            ICRecord ic;
            ic.ic_id = "ic" + std::to_string(i);
            ic.patient_id = patient.patient_id;
            ic.image = random_image(40, 48, 100 * p + i);
            ic.timecourse = {0.5, -1.25, 3.0, 0.0, 2.5};
            ic.label = static_cast<Label>(i % 3);
            patient.ics.push_back(std::move(ic));
        }
        ds.patients.push_back(std::move(patient));
    }
    return ds;
}

}  // namespace

TEST_CASE("resize_image hits the montage target dims") {
    Image img = random_image(709, 1006, 1);
    const Image out = resize_image(img, 270, 470);
    CHECK(out.height == 270);
    CHECK(out.width == 470);
}

TEST_CASE("resize_image to identical dims is pixel-identical") {
    Image img = random_image(33, 57, 2);
    CHECK(resize_image(img, 33, 57) == img);
}

TEST_CASE("resize_image keeps a constant image constant") {
    Image img(4, 4);
    std::fill(img.data.begin(), img.data.end(), 77);
    const Image out = resize_image(img, 2, 2);
    for (auto v : out.data) CHECK(v == 77);
}

TEST_CASE("resize_image output stays inside the input range") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Image img = random_image(17 + (rng() % 40), 11 + (rng() % 60), rng());
        std::uint8_t lo = 255, hi = 0;
        for (auto v : img.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const Image out = resize_image(img, 8 + (rng() % 30), 8 + (rng() % 30));
        for (auto v : out.data) {
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }
}

TEST_CASE("resize_image rejects empty targets") {
    Image img = random_image(16, 16, 4);
    CHECK_THROWS_AS(resize_image(img, 0, 8), ArgumentError);
}

TEST_CASE("PNG round trip is bit exact") {
    test_util::TempDir dir("png");
    const Image img = random_image(37, 53, 5);
    write_png(dir.str() + "/img.png", img);
    CHECK(read_png(dir.str() + "/img.png") == img);
}

TEST_CASE("read_png rejects non-PNG input") {
    test_util::TempDir dir("badpng");
    atomic_write_text(dir.str() + "/fake.png", "definitely not a png");
    CHECK_THROWS_AS(read_png(dir.str() + "/fake.png"), DataError);
    CHECK_THROWS_AS(read_png(dir.str() + "/missing.png"), DataError);
}

TEST_CASE("dataset save/load round trip preserves everything") {
    test_util::TempDir dir("roundtrip");
    const Dataset ds = tiny_dataset();
    const std::string manifest = save_dataset(ds, dir.str());
    const Dataset loaded = load_manifest(manifest);

    REQUIRE(loaded.patients.size() == ds.patients.size());
    CHECK(loaded.tr_seconds == ds.tr_seconds);
    REQUIRE(loaded.montage_layout.has_value());
    CHECK(*loaded.montage_layout == *ds.montage_layout);
    std::size_t total = 0;
    for (std::size_t p = 0; p < ds.patients.size(); ++p) {
        CHECK(loaded.patients[p].patient_id == ds.patients[p].patient_id);
        CHECK(loaded.patients[p].sex == ds.patients[p].sex);
        for (std::size_t i = 0; i < ds.patients[p].ics.size(); ++i) {
            const ICRecord& a = ds.patients[p].ics[i];
            const ICRecord& b = loaded.patients[p].ics[i];
            CHECK(a.ic_id == b.ic_id);
            CHECK(a.image == b.image);            // bit-exact images
            CHECK(a.timecourse == b.timecourse);  // exact doubles
            CHECK(a.label == b.label);
            ++total;
        }
    }
    CHECK(total == 6);

    // second round trip is byte-identical at the manifest level
    test_util::TempDir dir2("roundtrip2");
    const std::string manifest2 = save_dataset(loaded, dir2.str());
    CHECK(read_text_file(manifest) == read_text_file(manifest2));
}

TEST_CASE("load_manifest orders patients and ICs deterministically") {
    test_util::TempDir dir("order");
    Dataset ds = tiny_dataset();
    std::swap(ds.patients[0], ds.patients[1]);
    std::swap(ds.patients[0].ics[0], ds.patients[0].ics[2]);
    const std::string manifest = save_dataset(ds, dir.str());
    const Dataset loaded = load_manifest(manifest);
    CHECK(loaded.patients[0].patient_id == "p0");
    CHECK(loaded.patients[1].patient_id == "p1");
    CHECK(loaded.patients[0].ics[0].ic_id == "ic0");
    CHECK(loaded.patients[0].ics[2].ic_id == "ic2");
}

TEST_CASE("load_manifest names the missing file") {
    test_util::TempDir dir("missing");
    const std::string manifest = save_dataset(tiny_dataset(), dir.str());
    std::filesystem::remove(dir.path / "p1" / "ic1.png");
    try {
        load_manifest(manifest);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("ic1.png") != std::string::npos);
    }
}

TEST_CASE("load_manifest rejects malformed JSON and bad fields") {
    test_util::TempDir dir("malformed");
    atomic_write_text(dir.str() + "/manifest.json", "{not json");
    CHECK_THROWS_AS(load_manifest(dir.str() + "/manifest.json"), DataError);
    atomic_write_text(dir.str() + "/manifest2.json", R"({"patients": 3})");
    CHECK_THROWS_AS(load_manifest(dir.str() + "/manifest2.json"), DataError);
}

TEST_CASE("validation rejects undersized images and short timecourses") {
    test_util::TempDir dir("undersized");
    Dataset ds = tiny_dataset(1, 1);
    ds.patients[0].ics[0].image = random_image(16, 100, 9);
    CHECK_THROWS_AS(load_manifest(save_dataset(ds, dir.str())), DataError);

    test_util::TempDir dir2("shorttc");
    Dataset ds2 = tiny_dataset(1, 1);
    ds2.patients[0].ics[0].timecourse = {1.0};
    CHECK_THROWS_AS(load_manifest(save_dataset(ds2, dir2.str())), DataError);
}

TEST_CASE("relabel_binary maps labels and keeps the originals") {
    Dataset ds = tiny_dataset(1, 3);
    ds.patients[0].ics[0].label = Label::NOISE;
    ds.patients[0].ics[1].label = Label::RSN;
    ds.patients[0].ics[2].label = Label::SOZ;
    const Dataset out = relabel_binary(ds);
    CHECK(out.patients[0].ics[0].binary_label == BinaryLabel::NOISE);
    CHECK(out.patients[0].ics[1].binary_label == BinaryLabel::NOT_NOISE);
    CHECK(out.patients[0].ics[2].binary_label == BinaryLabel::NOT_NOISE);
    CHECK(out.patients[0].ics[1].label == Label::RSN);

    // idempotent, count preserved
    const Dataset twice = relabel_binary(out);
    CHECK(twice.total_ics() == ds.total_ics());
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(twice.patients[0].ics[i].binary_label == out.patients[0].ics[i].binary_label);
    }
}

TEST_CASE("relabel_binary on an empty dataset and on unlabeled ICs") {
    Dataset empty;
    CHECK(relabel_binary(empty).patients.empty());

    Dataset ds = tiny_dataset(1, 1);
    ds.patients[0].ics[0].label.reset();
    CHECK_THROWS_AS(relabel_binary(ds), ArgumentError);
}

TEST_CASE("timecourse files ignore blank lines and reject junk") {
    test_util::TempDir dir("tc");
    atomic_write_text(dir.str() + "/a.txt", "1.5\n\n  \n-2.75e-3\n42\n");
    const std::vector<double> tc = read_timecourse(dir.str() + "/a.txt");
    REQUIRE(tc.size() == 3);
    CHECK(tc[0] == 1.5);
    CHECK(tc[1] == -2.75e-3);
    CHECK(tc[2] == 42.0);

    atomic_write_text(dir.str() + "/bad.txt", "1.0\nbanana\n");
    CHECK_THROWS_AS(read_timecourse(dir.str() + "/bad.txt"), DataError);
}
