#include "lcrec/experiment.hpp"

#include "lcrec/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace lcrec {

std::string mode_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Fig1ZcSweep: return "fig1_zc_sweep";
        case ExperimentMode::Fig2LcSweep: return "fig2_lc_sweep";
        case ExperimentMode::Fig3OctaveBand: return "fig3_octave_band";
        case ExperimentMode::Single: return "single";
    }
    return "single";
}

ExperimentMode mode_from_name(const std::string& name) {
    if (name == "fig1_zc_sweep" || name == "fig1") return ExperimentMode::Fig1ZcSweep;
    if (name == "fig2_lc_sweep" || name == "fig2") return ExperimentMode::Fig2LcSweep;
    if (name == "fig3_octave_band" || name == "fig3") return ExperimentMode::Fig3OctaveBand;
    if (name == "single") return ExperimentMode::Single;
    throw std::invalid_argument("unknown experiment mode: " + name);
}

namespace {

const std::vector<std::string> kKnownSolvers{"bsl0", "biht", "biht_lc", "bsl0_lc", "omp"};

bool known_solver(const std::string& name) {
    for (const auto& s : kKnownSolvers)
        if (s == name) return true;
    return false;
}

} // namespace

void ExperimentConfig::validate() const {
    spec.validate();
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be at least 1");
    if (k_list.empty()) throw std::invalid_argument("ExperimentConfig: K_list must be non-empty");
    if (l_list.empty()) throw std::invalid_argument("ExperimentConfig: L_list must be non-empty");
    if (!std::isfinite(success_threshold_db))
        throw std::invalid_argument("ExperimentConfig: success threshold must be finite");
    const int lo = (!include_dc && spec.band_lo == 0) ? 1 : spec.band_lo;
    const int width = spec.band_hi - lo + 1;
    for (int k : k_list)
        if (k < 1 || k > width)
            throw std::invalid_argument("ExperimentConfig: K outside [1, band width]");
    for (int l : l_list)
        if (l < 0 || l % 2 != 0)
            throw std::invalid_argument("ExperimentConfig: L values must be even and non-negative");
    for (const auto& s : solvers)
        if (!known_solver(s)) throw std::invalid_argument("ExperimentConfig: unknown solver " + s);
    bsl0.validate();
    bsl0_lc.validate();
    if (!(biht.epsilon > 0.0) || biht.iter_max < 1)
        throw std::invalid_argument("ExperimentConfig: bad biht parameters");
    if (!(biht_lc.epsilon > 0.0) || biht_lc.iter_max < 1)
        throw std::invalid_argument("ExperimentConfig: bad biht_lc parameters");
    if (omp_oversample < 1) throw std::invalid_argument("ExperimentConfig: omp_oversample must be >= 1");
    if (threads < 1) throw std::invalid_argument("ExperimentConfig: threads must be >= 1");
}

ExperimentConfig preset_config(ExperimentMode mode, std::uint64_t master_seed) {
    ExperimentConfig cfg;
    cfg.mode = mode;
    cfg.master_seed = master_seed;
    cfg.spec = SignalSpec{};
    switch (mode) {
        case ExperimentMode::Fig1ZcSweep:
            cfg.k_list = {2, 5, 10, 15, 20};
            cfg.l_list = {0};
            cfg.solvers = {"bsl0", "biht"};
            cfg.trials = 50;
            break;
        case ExperimentMode::Fig2LcSweep:
            cfg.k_list = {10};
            cfg.l_list = {2, 4, 8};
            cfg.solvers = {"biht_lc", "bsl0_lc"};
            cfg.trials = 50;
            break;
        case ExperimentMode::Fig3OctaveBand:
            cfg.spec.band_lo = 201;
            cfg.spec.band_hi = 400;
            cfg.k_list = {2, 5, 10, 20, 40, 70, 100};
            cfg.l_list = {4};
            cfg.solvers = {"bsl0", "biht", "omp"};
            cfg.trials = 50;
            cfg.restrict_dictionary_to_band = true;
            cfg.omp_oversample = 16;
            break;
        case ExperimentMode::Single:
            cfg.k_list = {10};
            cfg.l_list = {0};
            cfg.solvers = {"bsl0"};
            cfg.trials = 1;
            break;
    }
    return cfg;
}

namespace {

void parse_bsl0_params(const nlohmann::json& j, Bsl0Params& p) {
    for (const auto& [key, value] : j.items()) {
        if (key == "sigma0") p.sigma0 = value.get<double>();
        else if (key == "lambda0") p.lambda0 = value.get<double>();
        else if (key == "theta0") p.theta0 = value.get<double>();
        else if (key == "alpha") p.alpha = value.get<double>();
        else if (key == "beta") p.beta = value.get<double>();
        else if (key == "delta") p.delta = value.get<double>();
        else if (key == "sigma_min") p.sigma_min = value.get<double>();
        else if (key == "mu") p.mu = value.get<double>();
        else if (key == "epsilon") p.epsilon = value.get<double>();
        else if (key == "iter_max") p.iter_max = value.get<int>();
        else if (key == "exact_penalty_gradient") p.exact_penalty_gradient = value.get<bool>();
        else if (key == "continue_sigma") p.continue_sigma = value.get<bool>();
        else throw std::invalid_argument("config: unknown bsl0 parameter " + key);
    }
}

void parse_biht_params(const nlohmann::json& j, BihtParams& p) {
    for (const auto& [key, value] : j.items()) {
        if (key == "mu") p.mu = value.get<double>();
        else if (key == "epsilon") p.epsilon = value.get<double>();
        else if (key == "iter_max") p.iter_max = value.get<int>();
        else throw std::invalid_argument("config: unknown biht parameter " + key);
    }
}

void parse_spec(const nlohmann::json& j, SignalSpec& spec) {
    for (const auto& [key, value] : j.items()) {
        if (key == "n_max") spec.n_max = value.get<int>();
        else if (key == "omega0") spec.omega0 = value.get<double>();
        else if (key == "duration") spec.duration = value.get<double>();
        else if (key == "sample_period") spec.sample_period = value.get<double>();
        else if (key == "band_lo") spec.band_lo = value.get<int>();
        else if (key == "band_hi") spec.band_hi = value.get<int>();
        else throw std::invalid_argument("config: unknown spec field " + key);
    }
}

} // namespace

ExperimentConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    ExperimentMode mode = ExperimentMode::Single;
    if (j.contains("mode")) mode = mode_from_name(j.at("mode").get<std::string>());
    ExperimentConfig cfg = preset_config(mode, 1);

    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "mode") continue;
            else if (key == "spec") parse_spec(value, cfg.spec);
            else if (key == "K_list") cfg.k_list = value.get<std::vector<int>>();
            else if (key == "L_list") cfg.l_list = value.get<std::vector<int>>();
            else if (key == "solvers") cfg.solvers = value.get<std::vector<std::string>>();
            else if (key == "trials") cfg.trials = value.get<int>();
            else if (key == "master_seed") cfg.master_seed = value.get<std::uint64_t>();
            else if (key == "success_threshold_db") cfg.success_threshold_db = value.get<double>();
            else if (key == "include_dc") cfg.include_dc = value.get<bool>();
            else if (key == "restrict_dictionary_to_band")
                cfg.restrict_dictionary_to_band = value.get<bool>();
            else if (key == "record_wall_time") cfg.record_wall_time = value.get<bool>();
            else if (key == "threads") cfg.threads = value.get<int>();
            else if (key == "solver_params") {
                for (const auto& [solver, params] : value.items()) {
                    if (solver == "bsl0") parse_bsl0_params(params, cfg.bsl0);
                    else if (solver == "bsl0_lc") parse_bsl0_params(params, cfg.bsl0_lc);
                    else if (solver == "biht") parse_biht_params(params, cfg.biht);
                    else if (solver == "biht_lc") parse_biht_params(params, cfg.biht_lc);
                    else if (solver == "omp") {
                        for (const auto& [okey, ovalue] : params.items()) {
                            if (okey == "oversample") cfg.omp_oversample = ovalue.get<int>();
                            else throw std::invalid_argument("config: unknown omp parameter " + okey);
                        }
                    } else throw std::invalid_argument("config: unknown solver_params entry " + solver);
                }
            } else throw std::invalid_argument("config: unknown field " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: bad field type: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["mode"] = mode_name(cfg.mode);
    j["spec"] = {{"n_max", cfg.spec.n_max},       {"omega0", cfg.spec.omega0},
                 {"duration", cfg.spec.duration}, {"sample_period", cfg.spec.sample_period},
                 {"band_lo", cfg.spec.band_lo},   {"band_hi", cfg.spec.band_hi}};
    j["K_list"] = cfg.k_list;
    j["L_list"] = cfg.l_list;
    j["solvers"] = cfg.solvers;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["success_threshold_db"] = cfg.success_threshold_db;
    j["include_dc"] = cfg.include_dc;
    j["restrict_dictionary_to_band"] = cfg.restrict_dictionary_to_band;
    j["record_wall_time"] = cfg.record_wall_time;
    j["threads"] = cfg.threads;
    const auto bsl0_json = [](const Bsl0Params& p) {
        return nlohmann::json{{"sigma0", p.sigma0},       {"lambda0", p.lambda0},
                              {"theta0", p.theta0},       {"alpha", p.alpha},
                              {"beta", p.beta},           {"delta", p.delta},
                              {"sigma_min", p.sigma_min}, {"mu", p.mu},
                              {"epsilon", p.epsilon},     {"iter_max", p.iter_max},
                              {"exact_penalty_gradient", p.exact_penalty_gradient},
                              {"continue_sigma", p.continue_sigma}};
    };
    const auto biht_json = [](const BihtParams& p) {
        return nlohmann::json{{"mu", p.mu}, {"epsilon", p.epsilon}, {"iter_max", p.iter_max}};
    };
    j["solver_params"] = {{"bsl0", bsl0_json(cfg.bsl0)},
                          {"bsl0_lc", bsl0_json(cfg.bsl0_lc)},
                          {"biht", biht_json(cfg.biht)},
                          {"biht_lc", biht_json(cfg.biht_lc)},
                          {"omp", {{"oversample", cfg.omp_oversample}}}};
    return j.dump(2);
}

namespace {

struct DictContext {
    Eigen::MatrixXd phi;        // coarse-grid dictionary columns
    std::vector<int> harmonics; // harmonic index per column
};

DictContext build_dict_context(const ExperimentConfig& cfg) {
    DictContext ctx;
    const SignalSpec& spec = cfg.spec;
    if (cfg.restrict_dictionary_to_band) {
        ctx.harmonics.resize(static_cast<size_t>(spec.band_width()));
        std::iota(ctx.harmonics.begin(), ctx.harmonics.end(), spec.band_lo);
    } else {
        ctx.harmonics.resize(static_cast<size_t>(spec.n_max + 1));
        std::iota(ctx.harmonics.begin(), ctx.harmonics.end(), 0);
    }
    const int m = spec.sample_count();
    ctx.phi.resize(m, static_cast<Eigen::Index>(ctx.harmonics.size()));
    for (int r = 0; r < m; ++r) {
        const double t = static_cast<double>(r) * spec.sample_period;
        for (size_t c = 0; c < ctx.harmonics.size(); ++c)
            ctx.phi(r, static_cast<Eigen::Index>(c)) =
                std::cos(static_cast<double>(ctx.harmonics[c]) * spec.omega0 * t);
    }
    return ctx;
}

CoeffVector embed_estimate(const Eigen::VectorXd& est, const DictContext& ctx, int n_max) {
    CoeffVector full = CoeffVector::Zero(n_max + 1);
    for (size_t c = 0; c < ctx.harmonics.size(); ++c)
        full[ctx.harmonics[c]] = est[static_cast<Eigen::Index>(c)];
    return full;
}

bool is_zc_solver(const std::string& name) { return name == "bsl0" || name == "biht"; }
bool is_lc_solver(const std::string& name) { return name == "biht_lc" || name == "bsl0_lc"; }

// Sign agreement of an estimate with the LC measurements of the true signal on
// the encoder grid; both sides use the sign(0) = +1 convention.
double lc_sign_agreement(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_est,
                         const std::vector<double>& levels) {
    Eigen::Index hits = 0;
    for (double level : levels) {
        for (Eigen::Index i = 0; i < x_true.size(); ++i) {
            const bool a = (x_true[i] - level) < 0.0;
            const bool b = (x_est[i] - level) < 0.0;
            if (a == b) ++hits;
        }
    }
    return static_cast<double>(hits) /
           (static_cast<double>(x_true.size()) * static_cast<double>(levels.size()));
}

struct TrialScratch {
    bool have_zc = false;
    Eigen::VectorXd y;
    bool have_lc = false;
    std::vector<double> levels;
    Eigen::MatrixXd phi_prime;
    Eigen::VectorXd y_prime;
    bool have_omp = false;
    SignalSpec fine_spec;
    Eigen::VectorXd xf;
    std::vector<double> levels_f;
    CrossingMeasurementSet set;
};

std::vector<TrialResult> run_trial_cell(const ExperimentConfig& cfg, const DictContext& ctx,
                                        int k, int l, int trial_index) {
    const std::uint64_t seed =
        mix_seed({cfg.master_seed, static_cast<std::uint64_t>(trial_index),
                  static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l)});
    const CoeffVector coeffs = random_sparse_coeffs(cfg.spec, k, cfg.include_dc, seed);
    const Eigen::VectorXd x = uniform_sample(coeffs, cfg.spec);

    TrialScratch scratch;
    std::vector<TrialResult> rows;
    rows.reserve(cfg.solvers.size());

    for (const std::string& solver : cfg.solvers) {
        TrialResult row;
        row.solver = solver;
        row.k = k;
        row.l = l;
        row.trial = trial_index;
        row.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (is_zc_solver(solver)) {
                if (!scratch.have_zc) {
                    scratch.y = sign_measure(x);
                    scratch.have_zc = true;
                }
                MeasurementEnsemble ens;
                ens.phi = ctx.phi; // shared dictionary; copy keeps the context reusable
                ens.signs = scratch.y;
                ens.kind = MeasurementKind::ZC;
                ens.spec = cfg.spec;
                const SolveTrace trace =
                    (solver == "bsl0")
                        ? bsl0_zc(ens, cfg.bsl0)
                        : biht_zc(ens, k, cfg.biht.mu, cfg.biht.epsilon, cfg.biht.iter_max);
                row.snr_db = reconstruction_snr(coeffs, embed_estimate(trace.estimate, ctx, cfg.spec.n_max), true);
                row.consistency = trace.sign_consistency;
                row.iterations = trace.iterations;
            } else if (is_lc_solver(solver)) {
                if (!scratch.have_lc) {
                    scratch.levels = uniform_levels(dynamic_range(x), l);
                    scratch.phi_prime = build_phi_prime(ctx.phi, scratch.levels);
                    scratch.y_prime = lc_measure(x, scratch.levels);
                    scratch.have_lc = true;
                }
                MeasurementEnsemble ens;
                ens.phi = scratch.phi_prime;
                ens.signs = scratch.y_prime;
                ens.kind = MeasurementKind::LC;
                ens.levels = scratch.levels;
                ens.spec = cfg.spec;
                const SolveTrace trace =
                    (solver == "biht_lc")
                        ? biht_lc(ens, k, cfg.biht_lc.mu, cfg.biht_lc.epsilon, cfg.biht_lc.iter_max)
                        : bsl0_lc(ens, cfg.bsl0_lc);
                row.snr_db = reconstruction_snr(coeffs, embed_estimate(trace.estimate, ctx, cfg.spec.n_max), false);
                row.consistency = trace.sign_consistency;
                row.iterations = trace.iterations;
            } else { // omp
                if (!scratch.have_omp) {
                    scratch.fine_spec = cfg.spec;
                    scratch.fine_spec.sample_period = cfg.spec.sample_period /
                                                      static_cast<double>(cfg.omp_oversample);
                    scratch.xf = (cfg.omp_oversample == 1) ? x : uniform_sample(coeffs, scratch.fine_spec);
                    scratch.levels_f = uniform_levels(dynamic_range(scratch.xf), l);
                    const LCEventStream stream =
                        encode_lc_events(scratch.xf, scratch.levels_f, scratch.fine_spec.sample_period);
                    scratch.set = crossing_measurements(stream, scratch.fine_spec);
                    scratch.have_omp = true;
                }
                const OmpResult res =
                    cfg.restrict_dictionary_to_band
                        ? omp_solve(scratch.set, k, ctx.harmonics)
                        : omp_solve(scratch.set, k);
                row.snr_db = reconstruction_snr(coeffs, res.coeffs, false);
                row.iterations = static_cast<int>(res.support.size());
                const Eigen::VectorXd x_est = uniform_sample(res.coeffs, scratch.fine_spec);
                row.consistency = lc_sign_agreement(scratch.xf, x_est, scratch.levels_f);
            }
        } catch (const std::exception&) {
            row.snr_db = -300.0;
            row.consistency = 0.0;
            row.iterations = 0;
        }
        if (cfg.record_wall_time) {
            const auto t1 = std::chrono::steady_clock::now();
            row.wall_time = std::chrono::duration<double>(t1 - t0).count();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::vector<TrialResult> run_trial(const ExperimentConfig& config, int trial_index) {
    config.validate();
    if (trial_index < 0) throw std::invalid_argument("run_trial: trial index must be >= 0");
    const DictContext ctx = build_dict_context(config);
    return run_trial_cell(config, ctx, config.k_list.front(), config.l_list.front(), trial_index);
}

std::vector<TrialResult> sweep(const ExperimentConfig& config) {
    config.validate();
    const DictContext ctx = build_dict_context(config);

    struct Cell {
        int k, l, trial;
    };
    std::vector<Cell> cells;
    cells.reserve(config.k_list.size() * config.l_list.size() *
                  static_cast<size_t>(config.trials));
    for (int k : config.k_list)
        for (int l : config.l_list)
            for (int t = 0; t < config.trials; ++t) cells.push_back({k, l, t});

    std::vector<std::vector<TrialResult>> slots(cells.size());
    if (config.threads <= 1) {
        for (size_t i = 0; i < cells.size(); ++i)
            slots[i] = run_trial_cell(config, ctx, cells[i].k, cells[i].l, cells[i].trial);
    } else {
        std::atomic<size_t> next{0};
        const int workers = std::min<int>(config.threads, static_cast<int>(cells.size()));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    slots[i] = run_trial_cell(config, ctx, cells[i].k, cells[i].l, cells[i].trial);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // flatten in (solver, K, L, trial) order so the report is schedule-independent
    std::vector<TrialResult> rows;
    rows.reserve(cells.size() * config.solvers.size());
    for (size_t s = 0; s < config.solvers.size(); ++s)
        for (size_t i = 0; i < cells.size(); ++i) rows.push_back(slots[i][s]);
    return rows;
}

std::vector<GroupRate> success_probability(const std::vector<TrialResult>& rows,
                                           double threshold_db) {
    if (rows.empty()) throw std::invalid_argument("success_probability: empty result table");
    std::vector<GroupRate> groups;
    for (const TrialResult& row : rows) {
        GroupRate* group = nullptr;
        for (auto& g : groups)
            if (g.solver == row.solver && g.k == row.k && g.l == row.l) {
                group = &g;
                break;
            }
        if (!group) {
            groups.push_back({row.solver, row.k, row.l, 0.0, 0});
            group = &groups.back();
        }
        group->count += 1;
        if (row.snr_db > threshold_db) group->rate += 1.0;
    }
    for (auto& g : groups) g.rate /= static_cast<double>(g.count);
    return groups;
}

std::string rows_to_csv(const std::vector<TrialResult>& rows) {
    std::string out = "solver,K,L,trial,seed,snr_db,consistency,iterations,wall_time\n";
    char buf[256];
    for (const TrialResult& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%llu,%.6f,%.6f,%d,%.6f\n", r.solver.c_str(),
                      r.k, r.l, r.trial, static_cast<unsigned long long>(r.seed), r.snr_db,
                      r.consistency, r.iterations, r.wall_time);
        out += buf;
    }
    return out;
}

std::vector<TrialResult> rows_from_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != "solver,K,L,trial,seed,snr_db,consistency,iterations,wall_time")
        throw std::invalid_argument("rows_from_csv: missing or malformed header");
    std::vector<TrialResult> rows;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 9) throw std::invalid_argument("rows_from_csv: malformed row");
        try {
            TrialResult r;
            r.solver = cells[0];
            r.k = std::stoi(cells[1]);
            r.l = std::stoi(cells[2]);
            r.trial = std::stoi(cells[3]);
            r.seed = std::stoull(cells[4]);
            r.snr_db = std::stod(cells[5]);
            r.consistency = std::stod(cells[6]);
            r.iterations = std::stoi(cells[7]);
            r.wall_time = std::stod(cells[8]);
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw std::invalid_argument("rows_from_csv: unparsable numeric field");
        }
    }
    return rows;
}

void emit_report_csv(const std::vector<TrialResult>& rows, const std::string& path) {
    write_text_file(path, rows_to_csv(rows));
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string render_chart(const std::vector<Series>& series, const std::string& x_label,
                         const std::string& y_label) {
    const double width = 860, height = 520;
    const double ml = 70, mr = 180, mt = 30, mb = 55;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const auto px = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * pw; };
    const auto py = [&](double v) { return mt + ph - (v - y_min) / (y_max - y_min) * ph; };

    std::string svg;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n<rect width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n",
                  width, height, width, height, width, height);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"#333\"/>\n",
                  ml, mt, pw, ph);
    svg += buf;

    for (int g = 0; g <= 4; ++g) {
        const double xv = x_min + (x_max - x_min) * g / 4.0;
        const double yv = y_min + (y_max - y_min) * g / 4.0;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n",
                      px(xv), mt, px(xv), mt + ph);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n",
                      ml, py(yv), ml + pw, py(yv));
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\" "
                      "font-family=\"sans-serif\">%s</text>\n",
                      px(xv), mt + ph + 18, fmt(xv).c_str());
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"end\" "
                      "font-family=\"sans-serif\">%s</text>\n",
                      ml - 6, py(yv) + 4, fmt(yv).c_str());
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  ml + pw / 2, height - 12, x_label.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"18\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\" transform=\"rotate(-90 18 %.1f)\">%s</text>\n",
                  mt + ph / 2, mt + ph / 2, y_label.c_str());
    svg += buf;

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 6];
        std::string points;
        for (size_t i = 0; i < series[s].x.size(); ++i) {
            char p[64];
            std::snprintf(p, sizeof(p), "%s%.2f,%.2f", i ? " " : "", px(series[s].x[i]),
                          py(series[s].y[i]));
            points += p;
        }
        std::snprintf(buf, sizeof(buf),
                      "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"2\" points=\"%s\"/>\n",
                      color, points.c_str());
        svg += buf;
        for (size_t i = 0; i < series[s].x.size(); ++i) {
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                          px(series[s].x[i]), py(series[s].y[i]), color);
            svg += buf;
        }
        const double ly = mt + 18 + 20.0 * static_cast<double>(s);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>\n",
                      ml + pw + 12, ly - 4, ml + pw + 36, ly - 4, color);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" font-family=\"sans-serif\">%s"
                      "</text>\n",
                      ml + pw + 42, ly, series[s].label.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace

std::string rows_to_svg(const std::vector<TrialResult>& rows, ExperimentMode mode,
                        int band_width) {
    if (rows.empty()) throw std::invalid_argument("rows_to_svg: empty result table");

    std::vector<Series> series;
    if (mode == ExperimentMode::Fig3OctaveBand) {
        // success rate vs sparsity factor, per solver, 20 dB threshold
        const auto groups = success_probability(rows, 20.0);
        for (const auto& g : groups) {
            const std::string label = g.solver;
            Series* s = nullptr;
            for (auto& existing : series)
                if (existing.label == label) s = &existing;
            if (!s) {
                series.push_back({label, {}, {}});
                s = &series.back();
            }
            s->x.push_back(static_cast<double>(g.k) / static_cast<double>(band_width));
            s->y.push_back(g.rate);
        }
        return render_chart(series, "sparsity factor (K / band width)", "success probability");
    }

    const bool x_is_l = (mode == ExperimentMode::Fig2LcSweep);
    struct Acc {
        std::string solver;
        int k, l;
        double sum = 0.0;
        int n = 0;
    };
    std::vector<Acc> accs;
    for (const TrialResult& row : rows) {
        Acc* acc = nullptr;
        for (auto& a : accs)
            if (a.solver == row.solver && a.k == row.k && a.l == row.l) acc = &a;
        if (!acc) {
            accs.push_back({row.solver, row.k, row.l, 0.0, 0});
            acc = &accs.back();
        }
        acc->sum += row.snr_db;
        acc->n += 1;
    }
    bool multi_k = false, multi_l = false;
    for (const auto& a : accs) {
        if (a.k != accs.front().k) multi_k = true;
        if (a.l != accs.front().l) multi_l = true;
    }
    for (const auto& a : accs) {
        std::string label = a.solver;
        if (x_is_l && multi_k) label += " K=" + std::to_string(a.k);
        if (!x_is_l && multi_l) label += " L=" + std::to_string(a.l);
        Series* s = nullptr;
        for (auto& existing : series)
            if (existing.label == label) s = &existing;
        if (!s) {
            series.push_back({label, {}, {}});
            s = &series.back();
        }
        s->x.push_back(static_cast<double>(x_is_l ? a.l : a.k));
        s->y.push_back(a.sum / static_cast<double>(a.n));
    }
    return render_chart(series, x_is_l ? "L (reference levels)" : "K (sparsity)",
                        "mean SNR (dB)");
}

void emit_report_svg(const std::vector<TrialResult>& rows, ExperimentMode mode, int band_width,
                     const std::string& path) {
    write_text_file(path, rows_to_svg(rows, mode, band_width));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("read failure: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw io_error("write failure: " + path);
}

SolveTrace solve_instance(const std::string& solver, const ExperimentConfig& config,
                          const MeasurementEnsemble& ensemble, int k, bool verbose_trace) {
    if (solver == "bsl0") return bsl0_zc(ensemble, config.bsl0, verbose_trace);
    if (solver == "biht")
        return biht_zc(ensemble, k, config.biht.mu, config.biht.epsilon, config.biht.iter_max,
                       verbose_trace);
    if (solver == "biht_lc")
        return biht_lc(ensemble, k, config.biht_lc.mu, config.biht_lc.epsilon,
                       config.biht_lc.iter_max, verbose_trace);
    if (solver == "bsl0_lc") return bsl0_lc(ensemble, config.bsl0_lc, verbose_trace);
    throw std::invalid_argument("solve_instance: no ensemble-based solver named " + solver);
}

} // namespace lcrec
