#pragma once

#include "mpgi/types.hpp"

namespace mpgi {

/// Memory cap on generated Hadamard orders (side 2^14).
inline constexpr int kMaxOrderLog2 = 14;

/// Hadamard matrix of order 2^k, entries ±1.
///
/// Built as H_{2^k} = H_{2^{k-1}} ⊗ H_2 so that even rows are the
/// pixel-replicated rows of the next lower order:
///   H_{2^k}(2u, x) = H_{2^{k-1}}(u, x/2).
/// Every indexing convention in this library relies on that embedding.
struct HadamardMatrix {
    int order_log2 = 0;
    std::vector<int8_t> entries;  // row-major, side 2^order_log2

    int side() const { return 1 << order_log2; }
    int8_t at(int m, int n) const { return entries[static_cast<size_t>(m) * side() + n]; }
};

HadamardMatrix hadamard_matrix(int k, int k_max = kMaxOrderLog2);

/// Row u of H_{2^k} without materializing the matrix. k = 0 gives [+1].
std::vector<int8_t> hadamard_row(int k, int u);

/// Single entry H_{2^k}(m, n); equals (-1)^popcount(m & n) under our convention.
int8_t hadamard_entry(int m, int n);

/// Separable 2D derived pattern: values(x,y) = H_{2^tier}(u,x) * H_{2^tier}(v,y).
struct Pattern {
    int tier = 0;
    int u = 0;
    int v = 0;
    PatternArray values;
};

Pattern pattern_2d(int tier, int u, int v);

/// Duplicate each pixel into a factor×factor block. factor must be a power of two.
PatternArray upsample_replicate(const PatternArray& p, int factor);
Image upsample_replicate(const Image& img, int factor);

/// Separable natural-order Walsh–Hadamard transform.
/// out(u,v) = sum_{x,y} H(u,x) H(v,y) img(x,y). Applying twice scales by 4^k.
Image fwht_2d(Image img);

}  // namespace mpgi
