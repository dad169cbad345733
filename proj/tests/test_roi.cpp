#include <doctest.h>

#include <cmath>

#include "mpgi/roi.hpp"

using namespace mpgi;

namespace {

BucketRecord acquire(const Scene& s, long long M, Mode mode = Mode::signed_mode) {
    return run_acquisition(s, {s.order_log2(), M}, mode, NoiseModel{}, 0);
}

Scene scene_with_block(int K, int x0, int y0, int box) {
    Scene s = synthetic_scene("blank", K, 0);
    for (int x = x0; x < x0 + box; ++x)
        for (int y = y0; y < y0 + box; ++y) s.at(x, y) = 0.95;
    return s;
}

double max_abs_residual_after_fit(const Image& recon, const Image& ref) {
    const FitScore fs = fit_and_score(recon, ref);
    double worst = 0.0;
    for (size_t i = 0; i < recon.v.size(); ++i)
        worst = std::max(worst, std::abs(fs.scale * recon.v[i] + fs.offset - ref.v[i]));
    return worst;
}

}  // namespace

TEST_CASE("lock_target: uniform snapshot has no target") {
    const Scene s = synthetic_scene("blank", 5, 0);
    const ReconImage snap = fast_reconstruct(acquire(s, 16), 5);
    CHECK_THROWS_AS(lock_target(snap, 5), NoTargetError);
}

TEST_CASE("lock_target: aligned square containing the bright block") {
    const Scene s = scene_with_block(7, 32, 48, 24);  // spans two tier-2 cells in y
    const ReconImage snap = fast_reconstruct(acquire(s, 16), 7);
    const RegionOfInterest roi = lock_target(snap, 7);
    CHECK(roi.lock_tier == 2);
    CHECK(roi.x0 % 32 == 0);
    CHECK(roi.y0 % 32 == 0);
    CHECK(is_power_of_two(roi.side));
    // Containment of every super-threshold region, here the whole block.
    CHECK(roi.x0 <= 32);
    CHECK(roi.y0 <= 48);
    CHECK(roi.x0 + roi.side >= 32 + 24);
    CHECK(roi.y0 + roi.side >= 48 + 24);
}

TEST_CASE("lock_target: corner-spanning brights force the whole frame") {
    Scene s = synthetic_scene("blank", 6, 0);
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) {
            s.at(x, y) = 0.9;
            s.at(63 - x, 63 - y) = 0.9;
        }
    const ReconImage snap = fast_reconstruct(acquire(s, 16), 6);
    const RegionOfInterest roi = lock_target(snap, 6);
    CHECK(roi.side == 64);
    CHECK(roi.x0 == 0);
    CHECK(roi.y0 == 0);
}

TEST_CASE("roi_acquire: full-frame ROI reproduces run_acquisition") {
    const Scene s = synthetic_scene("random", 4, 7);
    const RegionOfInterest roi{0, 0, 16, 2};
    const BucketRecord direct = acquire(s, 256);
    const BucketRecord via_roi = roi_acquire(s, roi, 4, Mode::signed_mode, NoiseModel{}, 0);
    CHECK(direct.values == via_roi.values);
}

TEST_CASE("roi_acquire: measurement count is roi.side^2 at full detail") {
    const Scene s = scene_with_block(7, 36, 36, 24);
    const RegionOfInterest roi{32, 32, 32, 2};
    const BucketRecord rec = roi_acquire(s, roi, 5, Mode::signed_mode, NoiseModel{}, 0);
    CHECK(rec.M() == 1024);
    CHECK(rec.K == 5);
}

TEST_CASE("roi_acquire: noiseless run reconstructs the ROI crop exactly") {
    const Scene s = synthetic_scene("random", 5, 13);
    const RegionOfInterest roi{8, 16, 8, 2};
    const BucketRecord rec = roi_acquire(s, roi, 3, Mode::differential, NoiseModel{}, 0);
    const ReconImage r = fast_reconstruct(rec, 3);
    const Scene crop = crop_scene(s, roi);
    Image ref(8);
    ref.v = crop.reflectance;
    CHECK(max_abs_residual_after_fit(r.pixels, ref) <= 1e-9);
}

TEST_CASE("roi_acquire validates geometry") {
    const Scene s = synthetic_scene("random", 4, 1);
    CHECK_THROWS_AS(roi_acquire(s, {12, 12, 8, 2}, 3, Mode::signed_mode, NoiseModel{}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(roi_acquire(s, {0, 0, 8, 2}, 4, Mode::signed_mode, NoiseModel{}, 0),
                    std::invalid_argument);
}

TEST_CASE("ROI-restricted full-frame patterns stay mutually orthogonal") {
    const int K = 4, frame = 16;
    const RegionOfInterest roi{4, 8, 4, 2};
    const int k_roi = 2;
    std::vector<std::vector<double>> fields;
    for (long long m = 0; m < 16; ++m) {
        const auto local = seq_to_pattern(m, k_roi);
        std::vector<double> field(size_t(frame) * frame, 0.0);
        for (int x = 0; x < roi.side; ++x)
            for (int y = 0; y < roi.side; ++y)
                field[size_t(roi.x0 + x) * frame + (roi.y0 + y)] = local.at(x, y);
        fields.push_back(std::move(field));
    }
    for (size_t a = 0; a < fields.size(); ++a)
        for (size_t b = 0; b < fields.size(); ++b) {
            double dot = 0.0;
            for (size_t j = 0; j < fields[a].size(); ++j) dot += fields[a][j] * fields[b][j];
            CHECK(dot == (a == b ? 16.0 : 0.0));
        }
    (void)K;
}

TEST_CASE("composite: whole-frame ROI returns the ROI image") {
    const Scene s = synthetic_scene("random", 3, 3);
    const ReconImage bg = fast_reconstruct(acquire(s, 4), 3);
    const ReconImage fg = fast_reconstruct(acquire(s, 64), 3);
    const RegionOfInterest roi{0, 0, 8, 1};
    const ReconImage out = composite(bg, fg, roi);
    const ReconImage fg_norm = affine_unit(fg);
    CHECK(out.pixels.v == fg_norm.pixels.v);
}

TEST_CASE("composite guards ROI mismatch") {
    const Scene s = synthetic_scene("random", 3, 3);
    const ReconImage bg = fast_reconstruct(acquire(s, 4), 3);
    const ReconImage fg = fast_reconstruct(acquire(s, 64), 3);  // side 8
    CHECK_THROWS_AS(composite(bg, fg, RegionOfInterest{0, 0, 4, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(composite(bg, fg, RegionOfInterest{4, 4, 8, 1}),
                    std::invalid_argument);
}

TEST_CASE("end-to-end: composite matches the scene on the target support") {
    const Scene s = scene_with_block(7, 36, 36, 24);
    const BucketRecord lock_rec = acquire(s, 16);
    const RegionOfInterest roi = lock_target(fast_reconstruct(lock_rec, 7), 7);
    CHECK(roi.side == 32);
    CHECK(roi.x0 == 32);
    CHECK(roi.y0 == 32);

    const BucketRecord roi_rec = roi_acquire(s, roi, 5, Mode::signed_mode, NoiseModel{}, 0);
    const ReconImage comp = composite(fast_reconstruct(lock_rec, 7),
                                      fast_reconstruct(roi_rec, 5), roi);
    // Inside the ROI the composite is the exact crop, up to the affine map.
    Image comp_roi(roi.side), ref_roi(roi.side);
    for (int x = 0; x < roi.side; ++x)
        for (int y = 0; y < roi.side; ++y) {
            comp_roi.at(x, y) = comp.pixels.at(roi.x0 + x, roi.y0 + y);
            ref_roi.at(x, y) = s.at(roi.x0 + x, roi.y0 + y);
        }
    CHECK(max_abs_residual_after_fit(comp_roi, ref_roi) <= 1e-9);
}

TEST_CASE("budget_report arithmetic") {
    const RegionOfInterest roi{32, 32, 32, 2};
    const BudgetReport rep = budget_report({2}, roi, 5, 7, Mode::signed_mode);
    CHECK(rep.lock_measurements == 16);
    CHECK(rep.roi_measurements == 1024);
    CHECK(rep.mpgi_total == 1040);
    CHECK(rep.full_frame == 16384);
    CHECK(rep.conventional == conventional_budget(7));

    const BudgetReport doubled = budget_report({2}, roi, 5, 7, Mode::differential);
    CHECK(doubled.mpgi_total == 2080);

    // ROI = frame: MPGI-with-ROI equals plain progressive.
    const RegionOfInterest whole{0, 0, 128, 0};
    const BudgetReport same = budget_report({}, whole, 7, 7, Mode::signed_mode);
    CHECK(same.mpgi_total == 16384);
    CHECK(same.full_frame == 16384);
}
