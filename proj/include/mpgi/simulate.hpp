#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mpgi/ordering.hpp"
#include "mpgi/types.hpp"

namespace mpgi {

/// Ground-truth reflectance map O(x,y), square with power-of-two side,
/// values in [0,1].
struct Scene {
    int side = 0;
    std::vector<double> reflectance;  // row-major
    std::string provenance;

    double at(int x, int y) const { return reflectance[static_cast<size_t>(x) * side + y]; }
    double& at(int x, int y) { return reflectance[static_cast<size_t>(x) * side + y]; }
    int order_log2() const { return log2_exact(side); }
    double total_flux() const;
};

/// How a ±1 pattern is projected physically.
///  signed_mode:    one projection of the ±1 field (idealized).
///  differential:   B+ and B- projections subtracted; equals signed_mode,
///                  but costs two projections in budget accounting.
///  binary_offset:  one projection of (1+P)/2; carries a DC offset.
enum class Mode { signed_mode, differential, binary_offset };

int projections_per_index(Mode mode);
std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct NoiseModel {
    enum class Kind { none, gaussian };
    Kind kind = Kind::none;
    double sigma = 0.0;
    double mean_offset = 0.0;
    std::optional<double> target_dsnr_db;
};

/// Hardware-specific DSNR landmarks quoted for reference; never asserted.
inline constexpr double kDsnrBreakpointLowDb = 8.62;
inline constexpr double kDsnrBreakpointHighDb = 32.71;

/// Ordered bucket stream {(m, B^(m))}, gap-free from m = 0.
struct BucketRecord {
    std::vector<double> values;  // values[m] is the bucket for sequence index m
    Mode mode = Mode::differential;
    uint64_t seed = 0;
    NoiseModel noise;
    int K = 0;

    long long M() const { return static_cast<long long>(values.size()); }
};

/// Single bucket value for one pattern over one scene.
double bucket(const PatternArray& pattern, const Scene& scene, Mode mode);

/// Gaussian noise whose sigma realizes the requested detection SNR
/// for the given mean signal: sigma = mean_bucket * 10^(-dsnr/10).
/// An infinite target yields the noiseless model.
NoiseModel calibrate_noise(double target_dsnr_db, double mean_bucket);

/// Counter-based standard normal draw; independent of call order.
double gaussian_draw(uint64_t seed, uint64_t index);

/// Noise value added to measurement m.
double noise_sample(const NoiseModel& noise, uint64_t seed, uint64_t index);

/// Run the full forward model: project the reordered pattern sequence onto
/// the scene and record noisy bucket values. Deterministic in (inputs, seed).
BucketRecord run_acquisition(const Scene& scene, const AcquisitionPlan& plan, Mode mode,
                             const NoiseModel& noise, uint64_t seed);

/// Same record with a different noise stream applied to the noiseless
/// bucket values. `base` must itself be noiseless.
BucketRecord apply_noise(const BucketRecord& base, const NoiseModel& noise, uint64_t seed);

/// Mean physical projection level of a record, used as <B> for DSNR
/// calibration: the mean of the (nonnegative) offset-binary projections.
double mean_signal_level(const BucketRecord& record);

/// Block-sum pyramid: level kappa holds 2^kappa x 2^kappa sums over
/// (side/2^kappa)-pixel blocks. Level K is the scene itself.
std::vector<Image> block_sum_pyramid(const Scene& scene);

/// Pad a non-power-of-two image up to the next power of two, centered.
Scene pad_to_power_of_two(const Scene& raw);

/// Named synthetic scenes: "bright-square", "bars", "aircraft", "random".
Scene synthetic_scene(const std::string& name, int K, uint64_t seed);

}  // namespace mpgi
