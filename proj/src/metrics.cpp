#include "mpgi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mpgi {

double dsnr_db(double mean_bucket, std::span<const double> noise_samples) {
    if (!(mean_bucket > 0.0)) throw std::invalid_argument("mean bucket must be positive");
    if (noise_samples.size() < 2) throw std::invalid_argument("need at least two noise samples");
    double mean = 0.0;
    for (double e : noise_samples) mean += e;
    mean /= static_cast<double>(noise_samples.size());
    double var = 0.0;
    for (double e : noise_samples) var += (e - mean) * (e - mean);
    var /= static_cast<double>(noise_samples.size());
    if (var == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mean_bucket / std::sqrt(var));
}

Image block_average(const Scene& scene, int tier) {
    const int K = scene.order_log2();
    if (tier < 0 || tier > K) throw std::invalid_argument("tier outside [0, K]");
    const int side = 1 << tier;
    const int block = 1 << (K - tier);
    Image out(side);
    for (int x = 0; x < side; ++x)
        for (int y = 0; y < side; ++y) {
            double s = 0.0;
            for (int dx = 0; dx < block; ++dx)
                for (int dy = 0; dy < block; ++dy)
                    s += scene.at(x * block + dx, y * block + dy);
            out.at(x, y) = s / (static_cast<double>(block) * block);
        }
    return out;
}

FitScore fit_and_score(const Image& recon, const Image& reference) {
    if (recon.side != reference.side)
        throw std::invalid_argument("image sides differ (" + std::to_string(recon.side) +
                                    " vs " + std::to_string(reference.side) + ")");
    const size_t n = recon.v.size();
    double mr = 0.0, mf = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mr += recon.v[i];
        mf += reference.v[i];
    }
    mr /= static_cast<double>(n);
    mf /= static_cast<double>(n);
    double srr = 0.0, sff = 0.0, srf = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dr = recon.v[i] - mr;
        const double df = reference.v[i] - mf;
        srr += dr * dr;
        sff += df * df;
        srf += dr * df;
    }

    FitScore fs;
    fs.scale = srr > 0.0 ? srf / srr : 0.0;
    fs.offset = mf - fs.scale * mr;
    double mse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = fs.scale * recon.v[i] + fs.offset - reference.v[i];
        mse += d * d;
    }
    fs.mse = mse / static_cast<double>(n);

    double ref_min = reference.v[0], ref_max = reference.v[0];
    for (double x : reference.v) {
        ref_min = std::min(ref_min, x);
        ref_max = std::max(ref_max, x);
    }
    const double peak = ref_max - ref_min;
    fs.psnr_db = (fs.mse < 1e-18 || peak == 0.0)
                     ? std::numeric_limits<double>::infinity()
                     : 10.0 * std::log10(peak * peak / fs.mse);
    // A constant image is detected by exact range, not by the centered sum of
    // squares: summation rounding leaves a spurious nonzero variance there.
    const auto [rec_min, rec_max] = std::minmax_element(recon.v.begin(), recon.v.end());
    const bool degenerate = peak == 0.0 || *rec_max - *rec_min == 0.0;
    fs.pearson_r = (!degenerate && srr > 0.0 && sff > 0.0)
                       ? srf / std::sqrt(srr * sff)
                       : std::numeric_limits<double>::quiet_NaN();
    return fs;
}

EvalReport evaluate_record(const BucketRecord& record, const Scene& scene) {
    const int K = scene.order_log2();
    EvalReport rep;
    rep.seed = record.seed;
    rep.mode = record.mode;
    rep.target_dsnr_db = record.noise.target_dsnr_db.value_or(
        record.noise.kind == NoiseModel::Kind::none
            ? std::numeric_limits<double>::infinity()
            : 0.0);

    // Achieved DSNR from the realized noise stream of this record.
    double achieved = std::numeric_limits<double>::infinity();
    if (record.noise.kind != NoiseModel::Kind::none) {
        std::vector<double> es(record.values.size());
        for (size_t m = 0; m < es.size(); ++m)
            es[m] = noise_sample(record.noise, record.seed, static_cast<uint64_t>(m));
        achieved = dsnr_db(mean_signal_level(record), es);
    }

    const auto snaps = progressive_snapshots(record, K);
    for (const auto& snap : snaps) {
        const Image ref =
            upsample_replicate(block_average(scene, snap.tier), 1 << (K - snap.tier));
        const FitScore fs = fit_and_score(snap.pixels, ref);
        rep.rows.push_back({snap.tier, 1LL << (2 * snap.tier), fs.mse, fs.psnr_db,
                            fs.pearson_r, achieved});
    }
    return rep;
}

SweepResult noise_sweep(const Scene& scene, int K, std::span<const double> dsnr_db_list,
                        std::span<const uint64_t> seeds, Mode mode) {
    if (seeds.size() < 2) throw std::invalid_argument("need at least two seeds per DSNR point");
    const AcquisitionPlan plan{K, 1LL << (2 * K)};
    const BucketRecord base = run_acquisition(scene, plan, mode, NoiseModel{}, 0);
    const double mean_bucket = mean_signal_level(base);

    SweepResult result;
    for (double target : dsnr_db_list) {
        const NoiseModel noise = calibrate_noise(target, mean_bucket);
        std::vector<EvalReport> cell_reports;
        for (uint64_t seed : seeds) {
            const BucketRecord rec = apply_noise(base, noise, seed);
            cell_reports.push_back(evaluate_record(rec, scene));
        }
        // Per-tier mean/std of PSNR across seeds.
        const size_t tiers = cell_reports.front().rows.size();
        for (size_t t = 0; t < tiers; ++t) {
            double mean = 0.0;
            for (const auto& r : cell_reports) mean += r.rows[t].psnr_db;
            mean /= static_cast<double>(cell_reports.size());
            double var = 0.0;
            for (const auto& r : cell_reports) {
                const double d = r.rows[t].psnr_db - mean;
                var += d * d;
            }
            var /= static_cast<double>(cell_reports.size());
            result.summary.push_back({target, cell_reports.front().rows[t].tier,
                                      cell_reports.front().rows[t].M, mean, std::sqrt(var)});
        }
        for (auto& r : cell_reports) result.reports.push_back(std::move(r));
    }
    return result;
}

std::string eval_report_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "tier,M,mse,psnr_db,pearson_r,achieved_dsnr_db\n";
    os.precision(17);
    for (const auto& r : report.rows)
        os << r.tier << ',' << r.M << ',' << r.mse << ',' << r.psnr_db << ','
           << r.pearson_r << ',' << r.achieved_dsnr_db << '\n';
    return os.str();
}

}  // namespace mpgi
