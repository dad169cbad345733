#include "mpgi/roi.hpp"

#include <algorithm>
#include <cmath>

namespace mpgi {

namespace {

int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

}  // namespace

RegionOfInterest lock_target(const ReconImage& snapshot, int K, double alpha) {
    const int frame = 1 << K;
    if (snapshot.pixels.side != frame)
        throw std::invalid_argument("snapshot side does not match frame");
    const int tier = snapshot.tier;
    const int cells = 1 << tier;
    const int cell = frame / cells;

    const ReconImage norm = affine_unit(snapshot);
    std::vector<double> cv(static_cast<size_t>(cells) * cells);
    for (int r = 0; r < cells; ++r)
        for (int c = 0; c < cells; ++c) {
            double s = 0.0;
            for (int dx = 0; dx < cell; ++dx)
                for (int dy = 0; dy < cell; ++dy)
                    s += norm.pixels.at(r * cell + dx, c * cell + dy);
            cv[static_cast<size_t>(r) * cells + c] = s / (static_cast<double>(cell) * cell);
        }

    double mean = 0.0;
    for (double x : cv) mean += x;
    mean /= static_cast<double>(cv.size());
    double var = 0.0;
    for (double x : cv) var += (x - mean) * (x - mean);
    var /= static_cast<double>(cv.size());
    const double threshold = mean + alpha * std::sqrt(var);

    int r0 = cells, r1 = -1, c0 = cells, c1 = -1;
    for (int r = 0; r < cells; ++r)
        for (int c = 0; c < cells; ++c)
            if (cv[static_cast<size_t>(r) * cells + c] > threshold) {
                r0 = std::min(r0, r);
                r1 = std::max(r1, r);
                c0 = std::min(c0, c);
                c1 = std::max(c1, c);
            }
    if (r1 < 0)
        throw NoTargetError("no cell exceeds mean + " + std::to_string(alpha) +
                            "*std at tier " + std::to_string(tier));

    const int extent = std::max((r1 - r0 + 1) * cell, (c1 - c0 + 1) * cell);
    const int side = std::min(frame, next_power_of_two(extent));
    RegionOfInterest roi;
    roi.side = side;
    roi.lock_tier = tier;
    roi.x0 = std::min(r0 * cell, frame - side);
    roi.y0 = std::min(c0 * cell, frame - side);
    return roi;
}

Scene crop_scene(const Scene& scene, const RegionOfInterest& roi) {
    if (roi.side < 1 || !is_power_of_two(roi.side) || roi.x0 < 0 || roi.y0 < 0 ||
        roi.x0 + roi.side > scene.side || roi.y0 + roi.side > scene.side)
        throw std::invalid_argument("ROI outside frame");
    Scene out;
    out.side = roi.side;
    out.reflectance.resize(static_cast<size_t>(roi.side) * roi.side);
    out.provenance = scene.provenance + ":roi(" + std::to_string(roi.x0) + "," +
                     std::to_string(roi.y0) + "," + std::to_string(roi.side) + ")";
    for (int x = 0; x < roi.side; ++x)
        for (int y = 0; y < roi.side; ++y)
            out.at(x, y) = scene.at(roi.x0 + x, roi.y0 + y);
    return out;
}

BucketRecord roi_acquire(const Scene& scene, const RegionOfInterest& roi, int target_tier,
                         Mode mode, const NoiseModel& noise, uint64_t seed) {
    const Scene cropped = crop_scene(scene, roi);
    const int k_roi = log2_exact(roi.side);
    if (target_tier < 0 || target_tier > k_roi)
        throw std::invalid_argument("target tier outside [0, log2(roi side)]");
    const AcquisitionPlan plan{k_roi, 1LL << (2 * target_tier)};
    return run_acquisition(cropped, plan, mode, noise, seed);
}

ReconImage composite(const ReconImage& background, const ReconImage& roi_image,
                     const RegionOfInterest& roi) {
    if (roi_image.pixels.side != roi.side)
        throw std::invalid_argument("ROI image side does not match ROI");
    const int frame = background.pixels.side;
    if (roi.x0 < 0 || roi.y0 < 0 || roi.x0 + roi.side > frame || roi.y0 + roi.side > frame)
        throw std::invalid_argument("ROI does not intersect the frame");

    ReconImage out = affine_unit(background);
    const ReconImage fg = affine_unit(roi_image);
    for (int x = 0; x < roi.side; ++x)
        for (int y = 0; y < roi.side; ++y)
            out.pixels.at(roi.x0 + x, roi.y0 + y) = fg.pixels.at(x, y);
    const int k_frame = log2_exact(frame);
    out.tier = roi_image.tier + (k_frame - log2_exact(roi.side));
    return out;
}

BudgetReport budget_report(const std::vector<int>& lock_path, const RegionOfInterest& roi,
                           int target_tier, int K, Mode mode) {
    BudgetReport rep;
    rep.projections_per_index = projections_per_index(mode);
    int lock_tier = -1;
    for (int t : lock_path) lock_tier = std::max(lock_tier, t);
    rep.lock_measurements = lock_tier >= 0 ? (1LL << (2 * lock_tier)) : 0;
    rep.roi_measurements = 1LL << (2 * target_tier);
    rep.mpgi_total =
        rep.projections_per_index * (rep.lock_measurements + rep.roi_measurements);
    const int frame_tier = target_tier + K - log2_exact(roi.side);
    rep.full_frame = rep.projections_per_index * (1LL << (2 * frame_tier));
    rep.conventional = rep.projections_per_index *
                       (frame_tier >= 1 ? conventional_budget(frame_tier) : 1);
    return rep;
}

}  // namespace mpgi
