#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpgi {

/// Square real-valued image, row-major. `x` indexes rows, `y` columns.
struct Image {
    int side = 0;
    std::vector<double> v;

    Image() = default;
    explicit Image(int side_, double fill = 0.0)
        : side(side_), v(static_cast<size_t>(side_) * side_, fill) {}

    double& at(int x, int y) { return v[static_cast<size_t>(x) * side + y]; }
    double at(int x, int y) const { return v[static_cast<size_t>(x) * side + y]; }
    size_t size() const { return v.size(); }
};

/// Square ±1 array, row-major.
struct PatternArray {
    int side = 0;
    std::vector<int8_t> v;

    PatternArray() = default;
    explicit PatternArray(int side_, int8_t fill = 1)
        : side(side_), v(static_cast<size_t>(side_) * side_, fill) {}

    int8_t& at(int x, int y) { return v[static_cast<size_t>(x) * side + y]; }
    int8_t at(int x, int y) const { return v[static_cast<size_t>(x) * side + y]; }
    size_t size() const { return v.size(); }
};

struct SizeLimitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoTargetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(long long n) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("value " + std::to_string(n) + " is not a power of two");
    int k = 0;
    while ((1LL << k) < n) ++k;
    return k;
}

}  // namespace mpgi
