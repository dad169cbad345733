#pragma once

#include <span>

#include "mpgi/recon.hpp"

namespace mpgi {

/// Detection SNR per the bucket-vs-background definition:
/// 10 log10(<B> / std(E)), population std. Zero variance reports +inf.
double dsnr_db(double mean_bucket, std::span<const double> noise_samples);

/// Mean over non-overlapping 2^(K-tier) blocks; result side 2^tier.
Image block_average(const Scene& scene, int tier);

struct FitScore {
    double mse = 0.0;
    double psnr_db = 0.0;     // +inf when mse is exactly-zero scale
    double pearson_r = 0.0;   // NaN when the reference is constant
    double scale = 1.0;       // fitted map: scale * recon + offset
    double offset = 0.0;
};

/// Least-squares affine fit of `recon` to `reference`, then MSE, PSNR
/// (peak = reference max - min) and Pearson correlation. Sides must match.
FitScore fit_and_score(const Image& recon, const Image& reference);

struct EvalRow {
    int tier = 0;
    long long M = 0;
    double mse = 0.0;
    double psnr_db = 0.0;
    double pearson_r = 0.0;
    double achieved_dsnr_db = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;  // sorted by tier
    uint64_t seed = 0;
    double target_dsnr_db = 0.0;
    Mode mode = Mode::differential;
};

/// Score a record's progressive snapshots against per-tier block-average
/// references of the ground-truth scene.
EvalReport evaluate_record(const BucketRecord& record, const Scene& scene);

struct SweepCell {
    double dsnr_db = 0.0;
    int tier = 0;
    long long M = 0;
    double psnr_mean = 0.0;
    double psnr_std = 0.0;
};

struct SweepResult {
    std::vector<EvalReport> reports;  // one per (dsnr, seed)
    std::vector<SweepCell> summary;   // per (dsnr, tier) across seeds
};

/// Noise-sensitivity study: one noiseless acquisition, then independent
/// noise streams per (dsnr, seed) cell. Deterministic.
SweepResult noise_sweep(const Scene& scene, int K, std::span<const double> dsnr_db_list,
                        std::span<const uint64_t> seeds, Mode mode);

std::string eval_report_csv(const EvalReport& report);

}  // namespace mpgi
