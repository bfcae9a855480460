#include "lcrec/cli.hpp"

#include "lcrec/experiment.hpp"
#include "lcrec/omp.hpp"
#include "lcrec/rng.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

namespace lcrec {
namespace {

namespace fs = std::filesystem;

struct Dictionary {
    Eigen::MatrixXd phi;
    std::vector<int> harmonics;
};

Dictionary build_dictionary(const SignalSpec& spec, bool restrict_to_band) {
    Dictionary dict;
    if (restrict_to_band) {
        dict.harmonics.resize(static_cast<size_t>(spec.band_width()));
        std::iota(dict.harmonics.begin(), dict.harmonics.end(), spec.band_lo);
    } else {
        dict.harmonics.resize(static_cast<size_t>(spec.n_max + 1));
        std::iota(dict.harmonics.begin(), dict.harmonics.end(), 0);
    }
    const int m = spec.sample_count();
    dict.phi.resize(m, static_cast<Eigen::Index>(dict.harmonics.size()));
    for (int r = 0; r < m; ++r) {
        const double t = static_cast<double>(r) * spec.sample_period;
        for (size_t c = 0; c < dict.harmonics.size(); ++c)
            dict.phi(r, static_cast<Eigen::Index>(c)) =
                std::cos(static_cast<double>(dict.harmonics[c]) * spec.omega0 * t);
    }
    return dict;
}

CoeffVector embed(const Eigen::VectorXd& est, const std::vector<int>& harmonics, int n_max) {
    CoeffVector full = CoeffVector::Zero(n_max + 1);
    for (size_t c = 0; c < harmonics.size(); ++c) full[harmonics[c]] = est[static_cast<Eigen::Index>(c)];
    return full;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir);
}

std::string joined(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

struct Options {
    std::string config_path;
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = ".";
    std::string in_path;
    int threads = 0;
    int trials = 0;
    bool timing = false;
    int band_width = 200;
};

ExperimentConfig resolve_config(const Options& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = config_from_json(read_text_file(opt.config_path));
    } else {
        const ExperimentMode mode =
            opt.mode.empty() ? ExperimentMode::Single : mode_from_name(opt.mode);
        cfg = preset_config(mode, 1);
    }
    if (opt.seed_set) cfg.master_seed = opt.seed;
    if (opt.threads > 0) cfg.threads = opt.threads;
    if (opt.trials > 0) cfg.trials = opt.trials;
    if (opt.timing) cfg.record_wall_time = true;
    cfg.validate();
    return cfg;
}

int run_gen(const Options& opt) {
    const ExperimentConfig cfg = resolve_config(opt);
    const int k = cfg.k_list.front();
    const int l = cfg.l_list.front();
    const std::uint64_t seed = mix_seed({cfg.master_seed, 0, static_cast<std::uint64_t>(k),
                                         static_cast<std::uint64_t>(l)});
    const CoeffVector coeffs = random_sparse_coeffs(cfg.spec, k, cfg.include_dc, seed);
    const Eigen::VectorXd x = uniform_sample(coeffs, cfg.spec);
    // L = 0 is the zero-crossing case: the one reference level is 0 itself.
    const std::vector<double> levels =
        (l == 0) ? std::vector<double>{0.0} : uniform_levels(dynamic_range(x), l);
    const LCEventStream stream = encode_lc_events(x, levels, cfg.spec.sample_period);

    ensure_out_dir(opt.out_dir);
    const std::string coeffs_csv = joined(opt.out_dir, "coeffs.csv");
    const std::string coeffs_json = joined(opt.out_dir, "coeffs.json");
    const std::string events_txt = joined(opt.out_dir, "events.txt");
    write_text_file(coeffs_csv, coeffs_to_csv(coeffs));
    write_text_file(coeffs_json, coeffs_to_sparse_json(coeffs));
    write_text_file(events_txt, lc_stream_to_text(stream));
    std::printf("K=%d L=%d seed=%llu events=%zu\n", k, l,
                static_cast<unsigned long long>(seed), stream.events.size());
    std::printf("wrote %s\n", coeffs_csv.c_str());
    std::printf("wrote %s\n", coeffs_json.c_str());
    std::printf("wrote %s\n", events_txt.c_str());
    return 0;
}

int run_solve(const Options& opt) {
    if (opt.in_path.empty()) throw std::invalid_argument("solve: --in <events file> is required");
    const ExperimentConfig cfg = resolve_config(opt);
    if (cfg.solvers.empty()) throw std::invalid_argument("solve: config names no solver");
    const std::string solver = cfg.solvers.front();
    const int k = cfg.k_list.front();

    const LCEventStream stream = lc_stream_from_text(read_text_file(opt.in_path));
    // The stream is self-describing in time; the config supplies the dictionary.
    SignalSpec spec = cfg.spec;
    spec.sample_period = stream.sample_period;
    spec.duration = static_cast<double>(stream.sample_count - 1) * stream.sample_period;
    spec.validate();
    if (spec.sample_count() != stream.sample_count)
        throw std::invalid_argument("solve: inconsistent sample count in stream header");

    ensure_out_dir(opt.out_dir);
    const std::string trace_path = joined(opt.out_dir, "trace.json");
    const std::string est_csv = joined(opt.out_dir, "estimate.csv");
    const std::string est_json = joined(opt.out_dir, "estimate.json");

    const Dictionary dict = build_dictionary(spec, cfg.restrict_dictionary_to_band);
    CoeffVector est_full;
    if (solver == "omp") {
        const CrossingMeasurementSet set = crossing_measurements(stream, spec);
        const OmpResult res = cfg.restrict_dictionary_to_band ? omp_solve(set, k, dict.harmonics)
                                                              : omp_solve(set, k);
        est_full = res.coeffs;
        nlohmann::json j;
        j["solver"] = "omp";
        j["iterations"] = res.support.size();
        j["support"] = res.support;
        j["residual_norms"] = res.residual_norms;
        j["rank_deficient"] = res.rank_deficient;
        write_text_file(trace_path, j.dump(2) + "\n");
        std::printf("omp: support size %zu, final residual %.6g\n", res.support.size(),
                    res.residual_norms.empty() ? 0.0 : res.residual_norms.back());
    } else {
        const Eigen::VectorXd signs = decode_lc_events(stream);
        MeasurementEnsemble ens;
        ens.spec = spec;
        ens.signs = signs;
        if (solver == "bsl0" || solver == "biht") {
            if (stream.levels.size() != 1 || stream.levels.front() != 0.0)
                throw std::invalid_argument(
                    "solve: " + solver + " needs a zero-crossing stream (single level 0)");
            ens.phi = dict.phi;
            ens.kind = MeasurementKind::ZC;
        } else {
            ens.phi = build_phi_prime(dict.phi, stream.levels);
            ens.kind = MeasurementKind::LC;
            ens.levels = stream.levels;
        }
        const SolveTrace trace = solve_instance(solver, cfg, ens, k, false);
        est_full = embed(trace.estimate, dict.harmonics, spec.n_max);
        write_text_file(trace_path, trace_to_json(trace) + "\n");
        std::printf("%s: iterations %d, sign consistency %.4f, converged %s\n", solver.c_str(),
                    trace.iterations, trace.sign_consistency, trace.converged ? "yes" : "no");
    }
    write_text_file(est_csv, coeffs_to_csv(est_full));
    write_text_file(est_json, coeffs_to_sparse_json(est_full));
    std::printf("wrote %s\n", trace_path.c_str());
    std::printf("wrote %s\n", est_csv.c_str());
    std::printf("wrote %s\n", est_json.c_str());
    return 0;
}

int run_experiment(const Options& opt) {
    const ExperimentConfig cfg = resolve_config(opt);
    const std::vector<TrialResult> rows = sweep(cfg);

    ensure_out_dir(opt.out_dir);
    const std::string csv_path = joined(opt.out_dir, "results.csv");
    const std::string svg_path = joined(opt.out_dir, "plot.svg");
    const std::string cfg_path = joined(opt.out_dir, "config.json");
    emit_report_csv(rows, csv_path);
    emit_report_svg(rows, cfg.mode, cfg.spec.band_width(), svg_path);
    write_text_file(cfg_path, config_to_json(cfg) + "\n");

    std::printf("%zu rows; success rates at %.1f dB:\n", rows.size(), cfg.success_threshold_db);
    for (const GroupRate& g : success_probability(rows, cfg.success_threshold_db))
        std::printf("  %-8s K=%-4d L=%-2d  %.3f  (%d trials)\n", g.solver.c_str(), g.k, g.l,
                    g.rate, g.count);
    std::printf("wrote %s\n", csv_path.c_str());
    std::printf("wrote %s\n", svg_path.c_str());
    std::printf("wrote %s\n", cfg_path.c_str());
    return 0;
}

int run_report(const Options& opt) {
    if (opt.in_path.empty()) throw std::invalid_argument("report: --in <results csv> is required");
    const ExperimentMode mode =
        opt.mode.empty() ? ExperimentMode::Fig1ZcSweep : mode_from_name(opt.mode);
    const std::vector<TrialResult> rows = rows_from_csv(read_text_file(opt.in_path));
    ensure_out_dir(opt.out_dir);
    const std::string svg_path = joined(opt.out_dir, "plot.svg");
    emit_report_svg(rows, mode, opt.band_width, svg_path);
    std::printf("wrote %s\n", svg_path.c_str());
    return 0;
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"sparse harmonic reconstruction from level-crossing signs"};
    app.require_subcommand(1);
    Options opt;

    const auto add_common = [&](CLI::App* cmd, bool with_mode) {
        CLI::Option* config = cmd->add_option("--config", opt.config_path,
                                              "JSON config mirroring the experiment fields");
        cmd->add_option("--out", opt.out_dir, "output directory (default .)");
        CLI::Option* seed = cmd->add_option("--seed", opt.seed, "master seed override");
        seed->each([&](const std::string&) { opt.seed_set = true; });
        if (with_mode) {
            CLI::Option* mode = cmd->add_option("--mode", opt.mode,
                                                "preset: fig1 | fig2 | fig3 | single");
            mode->excludes(config);
        }
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a sparse signal and its event stream");
    add_common(gen, true);

    CLI::App* solve = app.add_subcommand("solve", "reconstruct one instance from an event stream");
    add_common(solve, true);
    solve->add_option("--in", opt.in_path, "event stream file (from gen)");

    CLI::App* experiment = app.add_subcommand("experiment", "run a seeded Monte Carlo sweep");
    add_common(experiment, true);
    experiment->add_option("--threads", opt.threads, "worker threads (output is schedule-independent)");
    experiment->add_option("--trials", opt.trials, "trial count override");
    experiment->add_flag("--timing", opt.timing, "record wall time per row (breaks byte-identical re-runs)");

    CLI::App* report = app.add_subcommand("report", "render an SVG plot from a results CSV");
    report->add_option("--in", opt.in_path, "results CSV (from experiment)");
    report->add_option("--out", opt.out_dir, "output directory (default .)");
    report->add_option("--mode", opt.mode, "plot style: fig1 | fig2 | fig3 | single");
    report->add_option("--band-width", opt.band_width,
                       "band width for the fig3 sparsity factor (default 200)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_gen(opt);
        if (solve->parsed()) return run_solve(opt);
        if (experiment->parsed()) return run_experiment(opt);
        return run_report(opt);
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

} // namespace lcrec
