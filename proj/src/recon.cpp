#include "mpgi/recon.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mpgi {

namespace {

void check_record(const BucketRecord& record, int K) {
    if (record.values.empty()) throw std::invalid_argument("empty bucket record");
    if (record.K != K) throw std::invalid_argument("record K does not match requested frame");
    if (record.M() > (1LL << (2 * K)))
        throw std::invalid_argument("record longer than the complete 4^K sequence");
}

int last_completed_tier(long long M) {
    int k = 0;
    while ((1LL << (2 * (k + 1))) <= M) ++k;
    return k;
}

/// Fixed pairwise-tree sum of term(lo..hi-1); identical regardless of any
/// parallel evaluation of subtrees.
Image pairwise_image_sum(long long lo, long long hi,
                         const std::function<Image(long long)>& term) {
    if (hi - lo == 1) return term(lo);
    const long long mid = lo + (hi - lo) / 2;
    Image a = pairwise_image_sum(lo, mid, term);
    const Image b = pairwise_image_sum(mid, hi, term);
    for (size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
    return a;
}

double pairwise_sum(const std::vector<double>& xs, size_t lo, size_t hi) {
    if (hi - lo == 1) return xs[lo];
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

}  // namespace

ReconImage affine_unit(const ReconImage& img) {
    ReconImage out = img;
    if (out.normalized) return out;
    const auto [mn_it, mx_it] = std::minmax_element(out.pixels.v.begin(), out.pixels.v.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx > mn) {
        out.norm_scale = 1.0 / (mx - mn);
        out.norm_offset = -mn / (mx - mn);
    } else {
        out.norm_scale = 0.0;
        out.norm_offset = 0.0;
    }
    for (double& p : out.pixels.v) p = out.norm_scale * p + out.norm_offset;
    out.normalized = true;
    return out;
}

std::vector<double> signed_equivalent(const BucketRecord& record) {
    std::vector<double> b = record.values;
    if (record.mode == Mode::binary_offset) {
        const double flux = b[0];
        for (double& x : b) x = 2.0 * x - flux;
    }
    return b;
}

ReconImage gi_correlate(const BucketRecord& record, int K) {
    check_record(record, K);
    const long long M = record.M();
    if (M < 2) throw std::invalid_argument("correlation estimator needs M >= 2");
    const std::vector<double> b = signed_equivalent(record);
    const double b_mean = pairwise_sum(b, 0, b.size()) / static_cast<double>(M);

    const auto pattern_image = [&](long long m) {
        const PatternArray p = seq_to_pattern(m, K);
        Image img(p.side);
        for (size_t i = 0; i < p.v.size(); ++i) img.v[i] = p.v[i];
        return img;
    };

    Image pat_mean = pairwise_image_sum(0, M, pattern_image);
    for (double& x : pat_mean.v) x /= static_cast<double>(M);

    Image acc = pairwise_image_sum(0, M, [&](long long m) {
        Image img = pattern_image(m);
        const double w = b[static_cast<size_t>(m)] - b_mean;
        for (size_t i = 0; i < img.v.size(); ++i)
            img.v[i] = w * (img.v[i] - pat_mean.v[i]);
        return img;
    });

    // DC restoration: mean subtraction annihilates the component along the
    // all-ones pattern (the only pixel set where <I> != 0); add it back so
    // completed tiers recover the scene exactly rather than up to a hole
    // in the top-left resolution cell.
    for (size_t i = 0; i < acc.v.size(); ++i)
        acc.v[i] = acc.v[i] / static_cast<double>(M) + b_mean * pat_mean.v[i];

    ReconImage out;
    out.tier = last_completed_tier(M);
    out.pixels = std::move(acc);
    return out;
}

ReconImage fast_reconstruct(const BucketRecord& record, int K) {
    check_record(record, K);
    const int tier = last_completed_tier(record.M());
    const long long M = 1LL << (2 * tier);
    const std::vector<double> b = signed_equivalent(record);

    Image coeff(1 << tier);
    for (long long m = 0; m < M; ++m) {
        const TierPos pos = seq_to_tier_pos(m);
        const int shift = tier - pos.tier;
        coeff.at(pos.u << shift, pos.v << shift) = b[static_cast<size_t>(m)];
    }
    Image img = fwht_2d(std::move(coeff));
    for (double& x : img.v) x /= static_cast<double>(M);

    ReconImage out;
    out.tier = tier;
    out.pixels = upsample_replicate(img, 1 << (K - tier));
    return out;
}

std::vector<ReconImage> progressive_snapshots(const BucketRecord& record, int K) {
    check_record(record, K);
    std::vector<ReconImage> snaps;
    for (int tier = 0; tier <= K && (1LL << (2 * tier)) <= record.M(); ++tier) {
        BucketRecord prefix = record;
        prefix.values.assign(record.values.begin(),
                             record.values.begin() + (1LL << (2 * tier)));
        snaps.push_back(fast_reconstruct(prefix, K));
    }
    return snaps;
}

long long gram_fwhm(int K, long long M) {
    if (K < 1 || K > kGramMaxOrderLog2)
        throw SizeLimitError("gram diagnostic limited to K in [1, " +
                             std::to_string(kGramMaxOrderLog2) + "]");
    const long long N = 1LL << (2 * K);
    if (M < 1 || M > N || !is_power_of_two(M) || (log2_exact(M) % 2) != 0)
        throw std::invalid_argument("M must be 4^kappa with kappa <= K");

    // Explicit Phi, then one representative row of Psi^T Psi. The last
    // pixel is used: it never lies in the top-left coarse cell, whose
    // Gram row is distorted by the mean subtraction.
    std::vector<std::vector<int8_t>> rows(static_cast<size_t>(M));
    for (long long m = 0; m < M; ++m) rows[static_cast<size_t>(m)] = seq_to_pattern(m, K).v;

    std::vector<double> col_mean(static_cast<size_t>(N), 0.0);
    for (const auto& r : rows)
        for (long long j = 0; j < N; ++j) col_mean[static_cast<size_t>(j)] += r[j];
    for (double& c : col_mean) c /= static_cast<double>(M);

    const long long j0 = N - 1;
    std::vector<double> g(static_cast<size_t>(N), 0.0);
    for (const auto& r : rows) {
        const double w = r[j0] - col_mean[static_cast<size_t>(j0)];
        for (long long j = 0; j < N; ++j)
            g[static_cast<size_t>(j)] += w * (r[j] - col_mean[static_cast<size_t>(j)]);
    }
    const double row_max = *std::max_element(g.begin(), g.end());
    long long count = 0;
    for (double x : g)
        if (x >= 0.5 * row_max) ++count;
    return count;
}

}  // namespace mpgi
