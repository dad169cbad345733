#include "mpgi/ordering.hpp"

#include <string>

namespace mpgi {

int tier_of(long long m) {
    if (m < 0) throw std::invalid_argument("sequence index must be nonnegative");
    int k = 0;
    while ((1LL << (2 * k)) <= m) ++k;
    return k;
}

std::vector<std::pair<int, int>> new_pairs(int tier) {
    if (tier < 0) throw std::invalid_argument("tier must be nonnegative");
    if (tier == 0) return {{0, 0}};
    const int side = 1 << tier;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve((1LL << (2 * tier)) - (1LL << (2 * tier - 2)));
    for (int u = 0; u < side; ++u)
        for (int v = 0; v < side; ++v)
            if ((u | v) & 1) pairs.emplace_back(u, v);
    return pairs;
}

TierPos seq_to_tier_pos(long long m) {
    const int tier = tier_of(m);
    if (tier == 0) return {0, 0, 0};
    const long long idx = m - (1LL << (2 * tier - 2));
    // Rows come in (even, odd) pairs: an even row contributes its 2^{tier-1}
    // odd columns, the following odd row all 2^tier columns.
    const long long half = 1LL << (tier - 1);
    const long long per_block = 3 * half;
    const long long blk = idx / per_block;
    const long long rem = idx % per_block;
    if (rem < half)
        return {tier, static_cast<int>(2 * blk), static_cast<int>(2 * rem + 1)};
    return {tier, static_cast<int>(2 * blk + 1), static_cast<int>(rem - half)};
}

PatternArray seq_to_pattern(long long m, int K) {
    if (K < 0 || K > kMaxOrderLog2)
        throw SizeLimitError("frame order log2 " + std::to_string(K) + " outside [0, " +
                             std::to_string(kMaxOrderLog2) + "]");
    if (m < 0 || m >= (1LL << (2 * K)))
        throw std::invalid_argument("sequence index " + std::to_string(m) +
                                    " outside [0, 4^" + std::to_string(K) + ")");
    const TierPos pos = seq_to_tier_pos(m);
    const Pattern p = pattern_2d(pos.tier, pos.u, pos.v);
    return upsample_replicate(p.values, 1 << (K - pos.tier));
}

long long conventional_budget(int kappa_max) {
    if (kappa_max < 1) throw std::invalid_argument("kappa_max must be >= 1");
    long long total = 0;
    for (int k = 1; k <= kappa_max; ++k) total += 1LL << (2 * k);
    return total;
}

std::vector<int> AcquisitionPlan::snapshot_tiers() const {
    std::vector<int> tiers;
    for (int k = 0; k <= K && (1LL << (2 * k)) <= M; ++k) tiers.push_back(k);
    return tiers;
}

}  // namespace mpgi
