#pragma once

#include "mpgi/metrics.hpp"
#include "mpgi/recon.hpp"

namespace mpgi {

/// Power-of-two square region aligned to the coarse grid of the tier
/// that detected it.
struct RegionOfInterest {
    int x0 = 0;
    int y0 = 0;
    int side = 0;       // power of two
    int lock_tier = 0;  // tier of the snapshot that produced the lock
};

/// Threshold the affine-normalized snapshot at mean + alpha * std over its
/// coarse cells, bound the super-threshold cells, and snap the box to the
/// smallest aligned power-of-two square. Throws NoTargetError when no cell
/// clears the threshold (uniform snapshots included); callers escalate to
/// the next tier.
RegionOfInterest lock_target(const ReconImage& snapshot, int K, double alpha = 1.0);

/// Complete reordered Hadamard acquisition restricted to the ROI: the
/// illumination is zero outside the region and the ROI-local derived
/// sequence inside it. The returned record is ROI-local (K = log2(side)).
BucketRecord roi_acquire(const Scene& scene, const RegionOfInterest& roi, int target_tier,
                         Mode mode, const NoiseModel& noise, uint64_t seed);

/// ROI crop of a scene (used by roi_acquire and the end-to-end tests).
Scene crop_scene(const Scene& scene, const RegionOfInterest& roi);

/// Coarse background everywhere, ROI pixels replaced by the high-resolution
/// reconstruction. Hard replacement, no seam blending.
ReconImage composite(const ReconImage& background, const ReconImage& roi_image,
                     const RegionOfInterest& roi);

struct BudgetReport {
    long long lock_measurements = 0;    // progressive prefix used for locking
    long long roi_measurements = 0;     // complete ROI basis
    long long mpgi_total = 0;           // (lock + roi) * projections per index
    long long full_frame = 0;           // full-frame progressive at equal detail
    long long conventional = 0;         // independent-runs ladder to equal detail
    int projections_per_index = 1;
};

/// Pure arithmetic comparison of measurement budgets.
BudgetReport budget_report(const std::vector<int>& lock_path, const RegionOfInterest& roi,
                           int target_tier, int K, Mode mode);

}  // namespace mpgi
