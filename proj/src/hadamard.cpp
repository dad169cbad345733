#include "mpgi/hadamard.hpp"

#include <bit>
#include <string>

namespace mpgi {

HadamardMatrix hadamard_matrix(int k, int k_max) {
    if (k < 1 || k > k_max)
        throw SizeLimitError("hadamard order log2 " + std::to_string(k) +
                             " outside [1, " + std::to_string(k_max) + "]");
    // H_{2^1}, then repeated right Kronecker product with H_2.
    HadamardMatrix h;
    h.order_log2 = 1;
    h.entries = {+1, +1, +1, -1};
    static const int8_t h2[2][2] = {{+1, +1}, {+1, -1}};
    for (int step = 2; step <= k; ++step) {
        const int prev_side = h.side();
        const int side = prev_side * 2;
        HadamardMatrix next;
        next.order_log2 = step;
        next.entries.resize(static_cast<size_t>(side) * side);
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j)
                next.entries[static_cast<size_t>(i) * side + j] =
                    static_cast<int8_t>(h.at(i >> 1, j >> 1) * h2[i & 1][j & 1]);
        h = std::move(next);
    }
    return h;
}

int8_t hadamard_entry(int m, int n) {
    return (std::popcount(static_cast<unsigned>(m) & static_cast<unsigned>(n)) & 1) ? -1 : +1;
}

std::vector<int8_t> hadamard_row(int k, int u) {
    if (k < 0 || k > kMaxOrderLog2)
        throw SizeLimitError("hadamard order log2 " + std::to_string(k) +
                             " outside [0, " + std::to_string(kMaxOrderLog2) + "]");
    const int side = 1 << k;
    if (u < 0 || u >= side) throw std::out_of_range("hadamard row index out of range");
    std::vector<int8_t> row(side);
    for (int x = 0; x < side; ++x) row[x] = hadamard_entry(u, x);
    return row;
}

Pattern pattern_2d(int tier, int u, int v) {
    if (tier < 0 || tier > kMaxOrderLog2)
        throw SizeLimitError("pattern tier " + std::to_string(tier) +
                             " outside [0, " + std::to_string(kMaxOrderLog2) + "]");
    const int side = 1 << tier;
    if (u < 0 || u >= side || v < 0 || v >= side)
        throw std::out_of_range("pattern index (" + std::to_string(u) + "," +
                                std::to_string(v) + ") out of range for tier " +
                                std::to_string(tier));
    Pattern p;
    p.tier = tier;
    p.u = u;
    p.v = v;
    p.values = PatternArray(side);
    const auto row_u = hadamard_row(tier, u);
    const auto row_v = hadamard_row(tier, v);
    for (int x = 0; x < side; ++x)
        for (int y = 0; y < side; ++y)
            p.values.at(x, y) = static_cast<int8_t>(row_u[x] * row_v[y]);
    return p;
}

namespace {

template <typename Arr>
Arr replicate(const Arr& src, int factor) {
    if (!is_power_of_two(factor))
        throw std::invalid_argument("replication factor " + std::to_string(factor) +
                                    " is not a power of two");
    if (factor == 1) return src;
    Arr out(src.side * factor);
    for (int x = 0; x < out.side; ++x)
        for (int y = 0; y < out.side; ++y)
            out.at(x, y) = src.at(x / factor, y / factor);
    return out;
}

void fwht_1d(double* data, int n, int stride) {
    for (int h = 1; h < n; h *= 2) {
        for (int i = 0; i < n; i += h * 2) {
            for (int j = i; j < i + h; ++j) {
                const double a = data[j * stride];
                const double b = data[(j + h) * stride];
                data[j * stride] = a + b;
                data[(j + h) * stride] = a - b;
            }
        }
    }
}

}  // namespace

PatternArray upsample_replicate(const PatternArray& p, int factor) {
    return replicate(p, factor);
}

Image upsample_replicate(const Image& img, int factor) { return replicate(img, factor); }

Image fwht_2d(Image img) {
    const int n = img.side;
    if (n < 1 || !is_power_of_two(n))
        throw std::invalid_argument("fwht_2d requires a power-of-two side, got " +
                                    std::to_string(n));
    for (int x = 0; x < n; ++x) fwht_1d(&img.v[static_cast<size_t>(x) * n], n, 1);
    for (int y = 0; y < n; ++y) fwht_1d(&img.v[y], n, n);
    return img;
}

}  // namespace mpgi
