// mpgi: computational ghost-imaging laboratory CLI.
//
// Subcommands: gen-patterns, acquire, reconstruct, roi-run, diagnose, sweep.
// Exit codes: 0 success, 2 config error, 3 no target, 4 I/O error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mpgi/config.hpp"
#include "mpgi/io.hpp"
#include "mpgi/metrics.hpp"
#include "mpgi/recon.hpp"
#include "mpgi/roi.hpp"

namespace fs = std::filesystem;
using namespace mpgi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoTarget = 3;
constexpr int kExitIo = 4;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("MPGI_OUT_DIR")) return env;
    return ".";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

Scene scene_from_settings(const Settings& cfg) {
    if (const auto path = cfg.maybe("scene.path")) return load_scene_pgm(*path);
    const std::string name = cfg.get("scene.synthetic", "");
    if (name.empty())
        throw ConfigError("scene.path or scene.synthetic must be set");
    const long long K = cfg.get_int("scene.K", -1);
    if (K < 0) throw ConfigError("scene.K required for synthetic scenes");
    return synthetic_scene(name, static_cast<int>(K),
                           static_cast<uint64_t>(cfg.get_int("scene.seed", 0)));
}

struct NoisePlan {
    NoiseModel model;
    uint64_t seed = 0;
};

// Calibrates sigma against the mean physical projection level of a
// noiseless rehearsal of the same acquisition.
NoisePlan noise_from_settings(const Settings& cfg, const Scene& scene,
                              const AcquisitionPlan& plan, Mode mode) {
    NoisePlan np;
    const double dsnr = cfg.get_double("acquire.dsnr_db",
                                       std::numeric_limits<double>::infinity());
    if (std::isinf(dsnr)) return np;
    if (!cfg.has("acquire.seed"))
        throw ConfigError("acquire.seed is required for any noisy run");
    np.seed = static_cast<uint64_t>(cfg.get_int("acquire.seed", 0));
    const BucketRecord rehearsal = run_acquisition(scene, plan, mode, NoiseModel{}, 0);
    np.model = calibrate_noise(dsnr, mean_signal_level(rehearsal));
    return np;
}

Settings load_settings(const std::string& config_path) {
    if (config_path.empty()) return Settings{};
    return parse_config_file(config_path);
}

int cmd_gen_patterns(const Settings& cfg, const fs::path& out_dir) {
    const int K = static_cast<int>(cfg.get_int("scene.K", -1));
    if (K < 0 || K > kMaxOrderLog2) throw ConfigError("gen-patterns needs scene.K in [0,14]");
    const long long total = 1LL << (2 * K);
    const long long count = cfg.get_int("acquire.M", total);
    if (count < 1 || count > total) throw ConfigError("pattern count outside [1, 4^K]");
    fs::create_directories(out_dir);
    for (long long m = 0; m < count; ++m) {
        const PatternArray p = seq_to_pattern(m, K);
        Image img(p.side);
        for (size_t i = 0; i < p.v.size(); ++i) img.v[i] = p.v[i] > 0 ? 1.0 : 0.0;
        char name[32];
        std::snprintf(name, sizeof name, "seq_%05lld.pgm", m);
        write_pgm_p5(out_dir / name, img);
    }
    std::cout << "wrote " << count << " patterns to " << out_dir << '\n';
    return kExitOk;
}

int cmd_acquire(const Settings& cfg, const fs::path& out_dir) {
    const Scene scene = scene_from_settings(cfg);
    const int K = scene.order_log2();
    AcquisitionPlan plan{K, cfg.get_int("acquire.M", 1LL << (2 * K))};
    if (plan.M < 1 || plan.M > (1LL << (2 * K)))
        throw ConfigError("acquire.M outside [1, 4^K]");
    const Mode mode = mode_from_string(cfg.get("acquire.mode", "differential"));
    const NoisePlan np = noise_from_settings(cfg, scene, plan, mode);

    const double t0 = now_s();
    const BucketRecord rec = run_acquisition(scene, plan, mode, np.model, np.seed);
    const double t1 = now_s();

    fs::create_directories(out_dir);
    const std::string record_name = cfg.get("output.record", "record.csv");
    write_record_csv(out_dir / record_name, rec);

    Settings echo = cfg;
    echo.set("acquire.M", std::to_string(plan.M));
    echo.set("acquire.mode", to_string(mode));
    echo.set("scene.K", std::to_string(K));
    write_text(out_dir / "manifest.txt",
               manifest_text(echo, {{"acquire", t1 - t0}}, {record_name}));
    std::cout << "acquired M=" << plan.M << " -> " << (out_dir / record_name) << '\n';
    return kExitOk;
}

int cmd_reconstruct(const std::string& record_path, bool naive, bool progressive,
                    const Settings& cfg, const fs::path& out_dir) {
    const BucketRecord rec = read_record_csv(record_path);
    const int K = rec.K;
    fs::create_directories(out_dir);

    std::vector<ReconImage> snaps;
    if (naive) {
        for (int tier = 0; tier <= K && (1LL << (2 * tier)) <= rec.M(); ++tier) {
            BucketRecord prefix = rec;
            prefix.values.resize(static_cast<size_t>(1LL << (2 * tier)));
            if (prefix.M() < 2) {
                snaps.push_back(fast_reconstruct(prefix, K));  // m=0 alone: flux only
            } else {
                ReconImage r = gi_correlate(prefix, K);
                snaps.push_back(std::move(r));
            }
        }
        // The naive estimator also consumes measurements beyond the last
        // completed tier; report that image as the final snapshot.
        if (!is_power_of_two(rec.M()) || (log2_exact(rec.M()) % 2) != 0)
            snaps.push_back(gi_correlate(rec, K));
    } else {
        snaps = progressive_snapshots(rec, K);
    }
    if (!progressive && snaps.size() > 1) snaps.erase(snaps.begin(), snaps.end() - 1);

    std::vector<std::string> outputs;
    for (const auto& snap : snaps) {
        const long long M = std::min<long long>(rec.M(), 1LL << (2 * snap.tier));
        char base[64];
        std::snprintf(base, sizeof base, "tier_%d_M%lld", snap.tier, M);
        write_pgm_p5(out_dir / (std::string(base) + ".pgm"), affine_unit(snap).pixels);
        write_image_csv(out_dir / (std::string(base) + ".csv"), snap.pixels);
        outputs.push_back(std::string(base) + ".pgm");
        outputs.push_back(std::string(base) + ".csv");
    }

    if (cfg.has("scene.path") || cfg.has("scene.synthetic")) {
        const Scene ref = scene_from_settings(cfg);
        if (ref.order_log2() != K) throw ConfigError("reference scene side != record frame");
        const EvalReport rep = evaluate_record(rec, ref);
        write_text(out_dir / "report.csv", eval_report_csv(rep));
        outputs.push_back("report.csv");
    }
    std::cout << "wrote " << snaps.size() << " snapshot(s) to " << out_dir << '\n';
    return kExitOk;
}

int cmd_roi_run(const Settings& cfg, const fs::path& out_dir) {
    const Scene scene = scene_from_settings(cfg);
    const int K = scene.order_log2();
    const Mode mode = mode_from_string(cfg.get("acquire.mode", "differential"));
    const double alpha = cfg.get_double("roi.alpha", 1.0);
    const int first_lock_tier = static_cast<int>(cfg.get_int("roi.lock_tier", 2));
    if (first_lock_tier < 0 || first_lock_tier > K)
        throw ConfigError("roi.lock_tier outside [0, K]");

    const double t0 = now_s();

    // Lock: escalate through tiers until a target shows, reusing the
    // progressive prefix (no measurement is repeated).
    std::vector<int> lock_path;
    RegionOfInterest roi;
    BucketRecord lock_record;
    bool locked = false;
    for (int tier = first_lock_tier; tier <= K; ++tier) {
        AcquisitionPlan plan{K, 1LL << (2 * tier)};
        const NoisePlan np = noise_from_settings(cfg, scene, plan, mode);
        lock_record = run_acquisition(scene, plan, mode, np.model, np.seed);
        lock_path.push_back(tier);
        try {
            roi = lock_target(fast_reconstruct(lock_record, K), K, alpha);
            locked = true;
            break;
        } catch (const NoTargetError&) {
            continue;
        }
    }
    if (!locked) throw NoTargetError("no target found up to tier " + std::to_string(K));

    const int k_roi = log2_exact(roi.side);
    int target_tier = static_cast<int>(cfg.get_int("roi.target_tier", k_roi));
    if (target_tier < 0 || target_tier > k_roi)
        throw ConfigError("roi.target_tier outside [0, log2(roi.side)]");

    // ROI refinement starts fresh (full-frame lock measurements are kept
    // only for the coarse background).
    const Scene roi_scene = crop_scene(scene, roi);
    const AcquisitionPlan roi_plan{k_roi, 1LL << (2 * target_tier)};
    NoisePlan roi_np;
    {
        const double dsnr = cfg.get_double("acquire.dsnr_db",
                                           std::numeric_limits<double>::infinity());
        if (!std::isinf(dsnr)) {
            if (!cfg.has("acquire.seed"))
                throw ConfigError("acquire.seed is required for any noisy run");
            roi_np.seed = static_cast<uint64_t>(cfg.get_int("acquire.seed", 0)) + 1;
            const BucketRecord rehearsal =
                run_acquisition(roi_scene, roi_plan, mode, NoiseModel{}, 0);
            roi_np.model = calibrate_noise(dsnr, mean_signal_level(rehearsal));
        }
    }
    const BucketRecord roi_record =
        roi_acquire(scene, roi, target_tier, mode, roi_np.model, roi_np.seed);

    const ReconImage background = fast_reconstruct(lock_record, K);
    const ReconImage roi_image = fast_reconstruct(roi_record, k_roi);
    const ReconImage comp = composite(background, roi_image, roi);
    const BudgetReport budget = budget_report(lock_path, roi, target_tier, K, mode);
    const double t1 = now_s();

    fs::create_directories(out_dir);
    write_pgm_p5(out_dir / "composite.pgm", comp.pixels);
    write_image_csv(out_dir / "composite.csv", comp.pixels);

    std::ostringstream bt;
    bt << "projections_per_index=" << budget.projections_per_index << '\n'
       << "lock_measurements=" << budget.lock_measurements << '\n'
       << "roi_measurements=" << budget.roi_measurements << '\n'
       << "mpgi_total=" << budget.mpgi_total << '\n'
       << "full_frame=" << budget.full_frame << '\n'
       << "conventional=" << budget.conventional << '\n';
    write_text(out_dir / "budget.txt", bt.str());

    Settings echo = cfg;
    echo.set("roi.locked.x0", std::to_string(roi.x0));
    echo.set("roi.locked.y0", std::to_string(roi.y0));
    echo.set("roi.locked.side", std::to_string(roi.side));
    echo.set("roi.locked.lock_tier", std::to_string(roi.lock_tier));
    write_text(out_dir / "manifest.txt",
               manifest_text(echo, {{"roi_run", t1 - t0}},
                             {"composite.pgm", "composite.csv", "budget.txt"}));

    std::cout << "ROI (" << roi.x0 << ',' << roi.y0 << ") side " << roi.side
              << "; budget " << budget.mpgi_total << " vs full-frame "
              << budget.full_frame << '\n';
    return kExitOk;
}

int cmd_diagnose(int K, const fs::path& out_dir) {
    if (K < 1 || K > kGramMaxOrderLog2)
        throw ConfigError("diagnose needs K in [1, " +
                          std::to_string(kGramMaxOrderLog2) + "]");
    std::ostringstream os;
    os << "kappa,M,fwhm\n";
    for (int kappa = 1; kappa <= K; ++kappa) {
        const long long M = 1LL << (2 * kappa);
        os << kappa << ',' << M << ',' << gram_fwhm(K, M) << '\n';
    }
    fs::create_directories(out_dir);
    write_text(out_dir / "fwhm.csv", os.str());
    std::cout << os.str();
    return kExitOk;
}

int cmd_sweep(const Settings& cfg, const fs::path& out_dir) {
    const Scene scene = scene_from_settings(cfg);
    const int K = scene.order_log2();
    const Mode mode = mode_from_string(cfg.get("acquire.mode", "differential"));

    std::vector<double> dsnrs;
    std::istringstream ds(cfg.get("sweep.dsnr_db", "10,20,40"));
    for (std::string tok; std::getline(ds, tok, ',');)
        dsnrs.push_back(tok == "inf" ? std::numeric_limits<double>::infinity()
                                     : std::stod(tok));
    const long long n_seeds = cfg.get_int("sweep.seeds", 2);
    if (n_seeds < 2) throw ConfigError("sweep.seeds must be >= 2");
    std::vector<uint64_t> seeds(static_cast<size_t>(n_seeds));
    const uint64_t seed0 = static_cast<uint64_t>(cfg.get_int("acquire.seed", 1));
    for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = seed0 + i;

    const SweepResult result = noise_sweep(scene, K, dsnrs, seeds, mode);
    std::ostringstream os;
    os << "dsnr_db,tier,M,psnr_mean,psnr_std\n";
    os.precision(17);
    for (const auto& c : result.summary)
        os << c.dsnr_db << ',' << c.tier << ',' << c.M << ',' << c.psnr_mean << ','
           << c.psnr_std << '\n';
    fs::create_directories(out_dir);
    write_text(out_dir / "sweep.csv", os.str());
    std::cout << "sweep summary -> " << (out_dir / "sweep.csv") << '\n';
    return kExitOk;
}

void apply_override(Settings& cfg, const std::string& key, const CLI::Option* opt,
                    const std::string& value) {
    if (opt->count() > 0) cfg.set(key, value);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-resolution progressive ghost-imaging laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir_flag;
    std::string scene_path, synthetic, mode_str, dsnr_str, record_path, ref_path, ref_synth;
    std::string dsnr_list;
    long long K = -1, M = -1, seed = -1, scene_seed = -1, lock_tier = -1, target_tier = -1,
              n_seeds = -1;
    double alpha = -1.0;
    bool naive = false, fast = false, progressive = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (or a prior manifest)");
        sub->add_option("--out", out_dir_flag, "output directory");
    };

    auto* gen = app.add_subcommand("gen-patterns", "stream reordered patterns to disk");
    add_common(gen);
    auto* gen_k = gen->add_option("--K", K, "frame order log2");
    auto* gen_m = gen->add_option("--count", M, "number of patterns");

    auto* acq = app.add_subcommand("acquire", "simulate a bucket-detector acquisition");
    add_common(acq);
    auto* acq_scene = acq->add_option("--scene", scene_path, "scene PGM path");
    auto* acq_synth = acq->add_option("--synthetic", synthetic, "synthetic scene name");
    auto* acq_k = acq->add_option("--K", K, "frame order log2 (synthetic scenes)");
    auto* acq_m = acq->add_option("--M", M, "measurement count");
    auto* acq_mode = acq->add_option("--mode", mode_str, "signed|differential|binary_offset");
    auto* acq_dsnr = acq->add_option("--dsnr", dsnr_str, "target DSNR in dB, or inf");
    auto* acq_seed = acq->add_option("--seed", seed, "noise seed (required if noisy)");
    auto* acq_sseed = acq->add_option("--scene-seed", scene_seed, "synthetic scene seed");

    auto* rc = app.add_subcommand("reconstruct", "reconstruct images from a record");
    add_common(rc);
    rc->add_option("--record", record_path, "measurement CSV")->required();
    rc->add_flag("--naive", naive, "correlation estimator path");
    rc->add_flag("--fast", fast, "transform path (default)");
    rc->add_flag("--progressive", progressive, "emit every completed tier");
    auto* rc_ref = rc->add_option("--reference", ref_path, "reference scene PGM for scoring");
    auto* rc_refsyn = rc->add_option("--reference-synthetic", ref_synth,
                                     "reference synthetic scene name");
    auto* rc_sseed = rc->add_option("--scene-seed", scene_seed, "reference scene seed");

    auto* rr = app.add_subcommand("roi-run", "lock a target, refine the ROI, composite");
    add_common(rr);
    auto* rr_scene = rr->add_option("--scene", scene_path, "scene PGM path");
    auto* rr_synth = rr->add_option("--synthetic", synthetic, "synthetic scene name");
    auto* rr_k = rr->add_option("--K", K, "frame order log2 (synthetic scenes)");
    auto* rr_mode = rr->add_option("--mode", mode_str, "projection mode");
    auto* rr_dsnr = rr->add_option("--dsnr", dsnr_str, "target DSNR in dB, or inf");
    auto* rr_seed = rr->add_option("--seed", seed, "noise seed");
    auto* rr_lock = rr->add_option("--lock-tier", lock_tier, "first lock tier");
    auto* rr_target = rr->add_option("--target-tier", target_tier, "ROI-local target tier");
    auto* rr_alpha = rr->add_option("--alpha", alpha, "lock threshold: mean + alpha*std");
    auto* rr_sseed = rr->add_option("--scene-seed", scene_seed, "synthetic scene seed");

    auto* di = app.add_subcommand("diagnose", "Gram FWHM table");
    add_common(di);
    auto* di_k = di->add_option("--K", K, "frame order log2 (<= 5)");

    auto* sw = app.add_subcommand("sweep", "noise-vs-resolution study");
    add_common(sw);
    auto* sw_scene = sw->add_option("--scene", scene_path, "scene PGM path");
    auto* sw_synth = sw->add_option("--synthetic", synthetic, "synthetic scene name");
    auto* sw_k = sw->add_option("--K", K, "frame order log2 (synthetic scenes)");
    auto* sw_mode = sw->add_option("--mode", mode_str, "projection mode");
    auto* sw_dsnr = sw->add_option("--dsnr-list", dsnr_list, "comma list of DSNR dB");
    auto* sw_seeds = sw->add_option("--seeds", n_seeds, "number of seeds (>= 2)");
    auto* sw_seed0 = sw->add_option("--seed", seed, "first seed");
    auto* sw_sseed = sw->add_option("--scene-seed", scene_seed, "synthetic scene seed");

    CLI11_PARSE(app, argc, argv);

    try {
        Settings cfg = load_settings(config_path);
        const fs::path out_dir =
            !out_dir_flag.empty() ? fs::path(out_dir_flag)
                                  : fs::path(cfg.get("output.dir", default_out_dir().string()));

        apply_override(cfg, "scene.path", acq_scene, scene_path);
        apply_override(cfg, "scene.path", rr_scene, scene_path);
        apply_override(cfg, "scene.path", sw_scene, scene_path);
        apply_override(cfg, "scene.synthetic", acq_synth, synthetic);
        apply_override(cfg, "scene.synthetic", rr_synth, synthetic);
        apply_override(cfg, "scene.synthetic", sw_synth, synthetic);
        for (auto* o : {gen_k, acq_k, rr_k, di_k, sw_k})
            apply_override(cfg, "scene.K", o, std::to_string(K));
        for (auto* o : {acq_sseed, rr_sseed, sw_sseed, rc_sseed})
            apply_override(cfg, "scene.seed", o, std::to_string(scene_seed));
        for (auto* o : {gen_m, acq_m}) apply_override(cfg, "acquire.M", o, std::to_string(M));
        for (auto* o : {acq_mode, rr_mode, sw_mode}) apply_override(cfg, "acquire.mode", o, mode_str);
        for (auto* o : {acq_dsnr, rr_dsnr}) apply_override(cfg, "acquire.dsnr_db", o, dsnr_str);
        for (auto* o : {acq_seed, rr_seed, sw_seed0})
            apply_override(cfg, "acquire.seed", o, std::to_string(seed));
        apply_override(cfg, "roi.lock_tier", rr_lock, std::to_string(lock_tier));
        apply_override(cfg, "roi.target_tier", rr_target, std::to_string(target_tier));
        apply_override(cfg, "roi.alpha", rr_alpha, std::to_string(alpha));
        apply_override(cfg, "sweep.dsnr_db", sw_dsnr, dsnr_list);
        apply_override(cfg, "sweep.seeds", sw_seeds, std::to_string(n_seeds));
        if (rc_ref->count()) cfg.set("scene.path", ref_path);
        if (rc_refsyn->count()) cfg.set("scene.synthetic", ref_synth);

        if (gen->parsed()) return cmd_gen_patterns(cfg, out_dir);
        if (acq->parsed()) return cmd_acquire(cfg, out_dir);
        if (rc->parsed()) {
            if (naive && fast) throw ConfigError("--fast and --naive are exclusive");
            if (rc_refsyn->count() && !cfg.has("scene.K")) {
                const BucketRecord peek = read_record_csv(record_path);
                cfg.set("scene.K", std::to_string(peek.K));
            }
            return cmd_reconstruct(record_path, naive, progressive, cfg, out_dir);
        }
        if (rr->parsed()) return cmd_roi_run(cfg, out_dir);
        if (di->parsed())
            return cmd_diagnose(static_cast<int>(cfg.get_int("scene.K", -1)), out_dir);
        if (sw->parsed()) return cmd_sweep(cfg, out_dir);
        throw ConfigError("no subcommand");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NoTargetError& e) {
        std::cerr << "no target: " << e.what() << '\n';
        return kExitNoTarget;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
