#pragma once

#include "mpgi/simulate.hpp"

namespace mpgi {

/// Reconstructed image. Coarse tiers are stored replicated to the full
/// frame side so every snapshot composites and displays uniformly.
struct ReconImage {
    int tier = 0;     // native resolution 2^tier
    Image pixels;     // full frame side
    bool normalized = false;
    double norm_scale = 1.0;   // affine map applied when normalized:
    double norm_offset = 0.0;  // stored = scale * raw + offset
};

/// Min-max affine normalization to [0,1]; records the applied map.
ReconImage affine_unit(const ReconImage& img);

/// Bucket values converted to their signed-pattern equivalents:
/// signed/differential pass through, binary_offset is unfolded via the
/// m = 0 (all-ones) flux measurement: B_signed = 2 B_offset - B_offset[0].
std::vector<double> signed_equivalent(const BucketRecord& record);

/// Correlation estimator over the whole record: per-pixel
///   O(x,y) = (1/M) sum_m (B_m - <B>)(I_m(x,y) - <I(x,y)>) + <B><I(x,y)>.
/// The trailing term restores the DC information that plain mean
/// subtraction removes for a basis containing the all-ones pattern;
/// everywhere the per-pixel pattern mean vanishes it changes nothing.
/// Summation over m is a fixed pairwise tree in ascending m.
ReconImage gi_correlate(const BucketRecord& record, int K);

/// Transform-domain reconstruction from the largest completed tier:
/// bucket values become Walsh-Hadamard coefficients on the tier grid,
/// one inverse fwht_2d recovers the block-sum image.
ReconImage fast_reconstruct(const BucketRecord& record, int K);

/// One reconstruction per completed tier, each from exactly the 4^kappa
/// prefix: the 2x2 ... 2^K x 2^K resolution ladder.
std::vector<ReconImage> progressive_snapshots(const BucketRecord& record, int K);

/// Count of entries >= half the row maximum in a representative row of
/// G = Psi^T Psi built from the first M reordered patterns; equals the
/// resolution-cell area 4^(K - kappa) at M = 4^kappa.
long long gram_fwhm(int K, long long M);

/// Largest K materializable for the explicit Gram diagnostic.
inline constexpr int kGramMaxOrderLog2 = 5;

}  // namespace mpgi
