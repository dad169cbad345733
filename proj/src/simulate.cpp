#include "mpgi/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mpgi {

double Scene::total_flux() const {
    double s = 0.0;
    for (double r : reflectance) s += r;
    return s;
}

int projections_per_index(Mode mode) { return mode == Mode::differential ? 2 : 1; }

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::signed_mode: return "signed";
        case Mode::differential: return "differential";
        case Mode::binary_offset: return "binary_offset";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "signed") return Mode::signed_mode;
    if (s == "differential") return Mode::differential;
    if (s == "binary_offset") return Mode::binary_offset;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

double bucket(const PatternArray& pattern, const Scene& scene, Mode mode) {
    if (pattern.side != scene.side)
        throw std::invalid_argument("pattern side " + std::to_string(pattern.side) +
                                    " does not match scene side " + std::to_string(scene.side));
    const size_t n = pattern.size();
    switch (mode) {
        case Mode::signed_mode: {
            double b = 0.0;
            for (size_t i = 0; i < n; ++i) b += pattern.v[i] * scene.reflectance[i];
            return b;
        }
        case Mode::differential: {
            double plus = 0.0, minus = 0.0;
            for (size_t i = 0; i < n; ++i) {
                if (pattern.v[i] > 0)
                    plus += scene.reflectance[i];
                else
                    minus += scene.reflectance[i];
            }
            return plus - minus;
        }
        case Mode::binary_offset: {
            double b = 0.0;
            for (size_t i = 0; i < n; ++i)
                if (pattern.v[i] > 0) b += scene.reflectance[i];
            return b;
        }
    }
    throw std::logic_error("unreachable");
}

NoiseModel calibrate_noise(double target_dsnr_db, double mean_bucket) {
    if (!(mean_bucket > 0.0))
        throw std::invalid_argument("mean bucket must be positive for noise calibration");
    NoiseModel nm;
    nm.target_dsnr_db = target_dsnr_db;
    if (std::isinf(target_dsnr_db)) {
        nm.kind = NoiseModel::Kind::none;
        return nm;
    }
    nm.kind = NoiseModel::Kind::gaussian;
    nm.sigma = mean_bucket * std::pow(10.0, -target_dsnr_db / 10.0);
    return nm;
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

double gaussian_draw(uint64_t seed, uint64_t index) {
    // Box-Muller over a counter-based stream: position in the sequence, not
    // call order, decides the draw.
    const uint64_t s0 = splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    const uint64_t s1 = splitmix64(s0);
    double u1 = uniform01(s0);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01(s1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double noise_sample(const NoiseModel& noise, uint64_t seed, uint64_t index) {
    if (noise.kind == NoiseModel::Kind::none) return 0.0;
    return noise.mean_offset + noise.sigma * gaussian_draw(seed, index);
}

std::vector<Image> block_sum_pyramid(const Scene& scene) {
    const int K = scene.order_log2();
    std::vector<Image> pyr(static_cast<size_t>(K) + 1);
    pyr[K] = Image(scene.side);
    pyr[K].v = scene.reflectance;
    for (int k = K - 1; k >= 0; --k) {
        const Image& fine = pyr[k + 1];
        Image coarse(1 << k);
        for (int x = 0; x < coarse.side; ++x)
            for (int y = 0; y < coarse.side; ++y)
                coarse.at(x, y) = fine.at(2 * x, 2 * y) + fine.at(2 * x, 2 * y + 1) +
                                  fine.at(2 * x + 1, 2 * y) + fine.at(2 * x + 1, 2 * y + 1);
        pyr[k] = std::move(coarse);
    }
    return pyr;
}

BucketRecord run_acquisition(const Scene& scene, const AcquisitionPlan& plan, Mode mode,
                             const NoiseModel& noise, uint64_t seed) {
    if (plan.K != scene.order_log2())
        throw std::invalid_argument("plan K does not match scene side");
    if (plan.M < 1 || plan.M > (1LL << (2 * plan.K)))
        throw std::invalid_argument("measurement count M must be in [1, 4^K]");

    const auto pyr = block_sum_pyramid(scene);
    const double flux = pyr[0].v[0];

    BucketRecord rec;
    rec.mode = mode;
    rec.seed = seed;
    rec.noise = noise;
    rec.K = plan.K;
    rec.values.resize(static_cast<size_t>(plan.M));

    for (long long m = 0; m < plan.M; ++m) {
        const TierPos pos = seq_to_tier_pos(m);
        const Image& level = pyr[pos.tier];
        const auto row_u = hadamard_row(pos.tier, pos.u);
        const auto row_v = hadamard_row(pos.tier, pos.v);
        const int side = level.side;
        double core = 0.0;
        for (int x = 0; x < side; ++x) {
            double line = 0.0;
            const double* lv = &level.v[static_cast<size_t>(x) * side];
            for (int y = 0; y < side; ++y) line += row_v[y] * lv[y];
            core += row_u[x] * line;
        }
        double b = core;
        if (mode == Mode::binary_offset) b = 0.5 * (core + flux);
        rec.values[static_cast<size_t>(m)] =
            b + noise_sample(noise, seed, static_cast<uint64_t>(m));
    }
    return rec;
}

BucketRecord apply_noise(const BucketRecord& base, const NoiseModel& noise, uint64_t seed) {
    if (base.noise.kind != NoiseModel::Kind::none)
        throw std::invalid_argument("apply_noise expects a noiseless base record");
    BucketRecord rec = base;
    rec.noise = noise;
    rec.seed = seed;
    for (size_t m = 0; m < rec.values.size(); ++m)
        rec.values[m] += noise_sample(noise, seed, static_cast<uint64_t>(m));
    return rec;
}

double mean_signal_level(const BucketRecord& record) {
    if (record.values.empty()) throw std::invalid_argument("empty record");
    double sum = 0.0;
    if (record.mode == Mode::binary_offset) {
        for (double v : record.values) sum += v;
    } else {
        const double flux = record.values[0];  // m = 0 is the all-ones pattern
        for (double v : record.values) sum += 0.5 * (v + flux);
    }
    return sum / static_cast<double>(record.values.size());
}

Scene pad_to_power_of_two(const Scene& raw) {
    if (raw.side > 0 && is_power_of_two(raw.side)) return raw;
    int side = 1;
    while (side < raw.side) side *= 2;
    Scene out;
    out.side = side;
    out.reflectance.assign(static_cast<size_t>(side) * side, 0.0);
    out.provenance = raw.provenance + " (padded to " + std::to_string(side) + ")";
    const int off = (side - raw.side) / 2;
    for (int x = 0; x < raw.side; ++x)
        for (int y = 0; y < raw.side; ++y)
            out.at(x + off, y + off) = raw.reflectance[static_cast<size_t>(x) * raw.side + y];
    return out;
}

Scene synthetic_scene(const std::string& name, int K, uint64_t seed) {
    if (K < 0 || K > kMaxOrderLog2)
        throw SizeLimitError("scene order log2 " + std::to_string(K) + " outside [0, " +
                             std::to_string(kMaxOrderLog2) + "]");
    const int side = 1 << K;
    Scene s;
    s.side = side;
    s.reflectance.assign(static_cast<size_t>(side) * side, 0.0);
    s.provenance = "synthetic:" + name + ":K=" + std::to_string(K) +
                   ":seed=" + std::to_string(seed);

    if (name == "blank") return s;
    if (name == "random") {
        for (size_t i = 0; i < s.reflectance.size(); ++i)
            s.reflectance[i] = uniform01(splitmix64(seed ^ splitmix64(i + 1)));
        return s;
    }
    if (name == "bright-square") {
        // One bright block on a dark background; 24x24 at (36,36) for side 128.
        const int box = std::max(1, 3 * side / 16);
        const int x0 = 9 * side / 32;
        for (size_t i = 0; i < s.reflectance.size(); ++i) s.reflectance[i] = 0.05;
        for (int x = x0; x < std::min(side, x0 + box); ++x)
            for (int y = x0; y < std::min(side, x0 + box); ++y) s.at(x, y) = 0.95;
        return s;
    }
    if (name == "bars") {
        const int w = std::max(1, side / 8);
        for (int x = 0; x < side; ++x)
            for (int y = 0; y < side; ++y) s.at(x, y) = ((y / w) % 2 == 0) ? 0.9 : 0.2;
        return s;
    }
    if (name == "aircraft") {
        // Crude planform: fuselage, swept main wing, tailplane.
        for (size_t i = 0; i < s.reflectance.size(); ++i) s.reflectance[i] = 0.02;
        auto fill = [&](int xa, int xb, int ya, int yb) {
            for (int x = std::max(0, xa); x < std::min(side, xb); ++x)
                for (int y = std::max(0, ya); y < std::min(side, yb); ++y) s.at(x, y) = 0.9;
        };
        const int c = side / 2;
        fill(side / 8, 7 * side / 8, c - side / 32 - 1, c + side / 32 + 1);  // fuselage
        fill(3 * side / 8, side / 2 + side / 16, side / 8, 7 * side / 8);    // main wing
        fill(3 * side / 4, 7 * side / 8, c - side / 8, c + side / 8);        // tail
        return s;
    }
    throw std::invalid_argument("unknown synthetic scene '" + name + "'");
}

}  // namespace mpgi
