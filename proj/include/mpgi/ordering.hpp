#pragma once

#include <utility>

#include "mpgi/hadamard.hpp"
#include "mpgi/types.hpp"

namespace mpgi {

/// Smallest tier whose complete basis contains sequence position m,
/// i.e. the smallest kappa with m < 4^kappa.
int tier_of(long long m);

/// Position of m inside the reordered measurement sequence.
struct TierPos {
    int tier;
    int u;
    int v;
};

/// Pairs introduced at `tier`: all (u,v) in [0,2^tier)^2 with u or v odd,
/// lexicographic. These are exactly the patterns not inherited from tier-1
/// via the (u,v) <- (2u',2v') embedding. Tier 0 yields [(0,0)].
std::vector<std::pair<int, int>> new_pairs(int tier);

/// Decode sequence position m to its (tier, u, v) without enumerating the tier.
TierPos seq_to_tier_pos(long long m);

/// Full-frame pattern for sequence position m at frame side 2^K:
/// the tier-local derived pattern pixel-replicated up to the frame.
PatternArray seq_to_pattern(long long m, int K);

/// Measurements a non-progressive scheme spends to produce the same
/// resolution ladder by independent complete runs: sum of 4^kappa.
long long conventional_budget(int kappa_max);

struct AcquisitionPlan {
    int K = 0;        // frame side 2^K
    long long M = 0;  // total measurements, <= 4^K

    /// Tiers whose complete basis fits in the first M measurements.
    std::vector<int> snapshot_tiers() const;
};

}  // namespace mpgi
