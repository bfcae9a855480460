#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lcrec/experiment.hpp"

#include <cstdio>
#include <filesystem>

using namespace lcrec;

namespace {

ExperimentConfig fast_config() {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Single;
    cfg.spec.n_max = 30;
    cfg.spec.omega0 = 10.0;
    cfg.spec.duration = 0.2;
    cfg.spec.sample_period = 1e-3;
    cfg.spec.band_lo = 1;
    cfg.spec.band_hi = 30;
    cfg.k_list = {3};
    cfg.l_list = {0};
    cfg.solvers = {"bsl0"};
    cfg.trials = 2;
    cfg.master_seed = 5;
    return cfg;
}

} // namespace

TEST_CASE("mode names round trip, short forms accepted") {
    for (ExperimentMode m : {ExperimentMode::Fig1ZcSweep, ExperimentMode::Fig2LcSweep,
                             ExperimentMode::Fig3OctaveBand, ExperimentMode::Single})
        CHECK(mode_from_name(mode_name(m)) == m);
    CHECK(mode_from_name("fig1") == ExperimentMode::Fig1ZcSweep);
    CHECK(mode_from_name("fig2") == ExperimentMode::Fig2LcSweep);
    CHECK(mode_from_name("fig3") == ExperimentMode::Fig3OctaveBand);
    CHECK_THROWS_AS(mode_from_name("fig4"), std::invalid_argument);
}

TEST_CASE("presets carry the published protocol parameters") {
    const ExperimentConfig f1 = preset_config(ExperimentMode::Fig1ZcSweep, 9);
    CHECK(f1.spec.n_max == 500);
    CHECK(f1.spec.sample_count() == 4001);
    CHECK(f1.k_list == std::vector<int>{2, 5, 10, 15, 20});
    CHECK(f1.solvers == std::vector<std::string>{"bsl0", "biht"});
    CHECK(f1.trials == 50);
    CHECK(f1.master_seed == 9);

    const ExperimentConfig f2 = preset_config(ExperimentMode::Fig2LcSweep, 1);
    CHECK(f2.l_list == std::vector<int>{2, 4, 8});
    CHECK(f2.solvers == std::vector<std::string>{"biht_lc", "bsl0_lc"});

    const ExperimentConfig f3 = preset_config(ExperimentMode::Fig3OctaveBand, 1);
    CHECK(f3.spec.band_lo == 201);
    CHECK(f3.spec.band_hi == 400);
    CHECK(f3.restrict_dictionary_to_band);
    CHECK(f3.omp_oversample == 16);
    CHECK(f3.solvers == std::vector<std::string>{"bsl0", "biht", "omp"});
}

TEST_CASE("config json round trip preserves every field") {
    ExperimentConfig cfg = preset_config(ExperimentMode::Fig3OctaveBand, 77);
    cfg.trials = 13;
    cfg.success_threshold_db = 18.5;
    cfg.bsl0.sigma0 = 0.2;
    cfg.biht_lc.mu = 0.125;
    cfg.threads = 4;
    cfg.record_wall_time = true;

    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.mode == cfg.mode);
    CHECK(back.spec.band_lo == 201);
    CHECK(back.spec.band_hi == 400);
    CHECK(back.k_list == cfg.k_list);
    CHECK(back.l_list == cfg.l_list);
    CHECK(back.solvers == cfg.solvers);
    CHECK(back.trials == 13);
    CHECK(back.master_seed == 77);
    CHECK(back.success_threshold_db == 18.5);
    CHECK(back.restrict_dictionary_to_band == cfg.restrict_dictionary_to_band);
    CHECK(back.record_wall_time);
    CHECK(back.bsl0.sigma0 == 0.2);
    CHECK(back.biht_lc.mu == 0.125);
    CHECK(back.omp_oversample == 16);
    CHECK(back.threads == 4);
}

TEST_CASE("config parsing starts from the named preset and overlays fields") {
    const ExperimentConfig cfg =
        config_from_json(R"({"mode": "fig2", "trials": 7, "master_seed": 3})");
    CHECK(cfg.mode == ExperimentMode::Fig2LcSweep);
    CHECK(cfg.trials == 7);
    CHECK(cfg.master_seed == 3);
    CHECK(cfg.l_list == std::vector<int>{2, 4, 8}); // preset remainder intact
}

TEST_CASE("config parsing rejects malformed input") {
    CHECK_THROWS_AS(config_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"no_such_field": 1})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"trials": 0})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"trials": "many"})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"solvers": ["bp"]})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"L_list": [3]})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"K_list": []})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"K_list": [9999]})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"solver_params": {"bsl0": {"bogus": 1}}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"solver_params": {"bp": {}}})"), std::invalid_argument);
}

TEST_CASE("sweep row accounting and ordering") {
    ExperimentConfig cfg = fast_config();
    cfg.k_list = {1, 2};
    cfg.solvers = {"bsl0", "biht"};
    cfg.trials = 3;
    const auto rows = sweep(cfg);
    REQUIRE(rows.size() == 2u * 2u * 3u); // solvers x K x trials

    size_t i = 0;
    for (const std::string& solver : cfg.solvers)
        for (int k : cfg.k_list)
            for (int t = 0; t < cfg.trials; ++t) {
                CHECK(rows[i].solver == solver);
                CHECK(rows[i].k == k);
                CHECK(rows[i].l == 0);
                CHECK(rows[i].trial == t);
                ++i;
            }
}

TEST_CASE("run_trial reproduces the matching sweep rows") {
    ExperimentConfig cfg = fast_config();
    cfg.solvers = {"bsl0", "biht"};
    const auto sweep_rows = sweep(cfg);
    const auto trial_rows = run_trial(cfg, 1);
    REQUIRE(trial_rows.size() == 2);
    // sweep order: bsl0 trials 0,1 then biht trials 0,1
    CHECK(trial_rows[0].seed == sweep_rows[1].seed);
    CHECK(trial_rows[0].snr_db == sweep_rows[1].snr_db);
    CHECK(trial_rows[1].snr_db == sweep_rows[3].snr_db);
    CHECK(trial_rows[0].solver == "bsl0");
    CHECK(trial_rows[1].solver == "biht");
}

TEST_CASE("per-trial seeds depend on trial, K, and L") {
    ExperimentConfig cfg = fast_config();
    const auto r0 = run_trial(cfg, 0);
    const auto r1 = run_trial(cfg, 1);
    CHECK(r0[0].seed != r1[0].seed);

    ExperimentConfig other_k = cfg;
    other_k.k_list = {4};
    CHECK(run_trial(other_k, 0)[0].seed != r0[0].seed);
}

TEST_CASE("solver failures become floor rows instead of aborts") {
    ExperimentConfig cfg = fast_config();
    cfg.spec.n_max = 5;
    cfg.spec.band_hi = 5;
    cfg.spec.duration = 0.01; // 11 samples; nowhere near 5 usable crossings
    cfg.k_list = {5};
    cfg.solvers = {"omp"};
    const auto rows = run_trial(cfg, 0);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].snr_db == -300.0);
    CHECK(rows[0].iterations == 0);
    CHECK(rows[0].consistency == 0.0);
}

TEST_CASE("empty solver list yields no rows") {
    ExperimentConfig cfg = fast_config();
    cfg.solvers = {};
    CHECK(run_trial(cfg, 0).empty());
    CHECK(sweep(cfg).empty());
}

TEST_CASE("repeat sweeps and threaded sweeps are byte-identical") {
    ExperimentConfig cfg = fast_config();
    cfg.k_list = {2, 3};
    cfg.solvers = {"bsl0", "biht"};
    cfg.trials = 2;

    const std::string csv1 = rows_to_csv(sweep(cfg));
    const std::string csv2 = rows_to_csv(sweep(cfg));
    CHECK(csv1 == csv2);

    ExperimentConfig threaded = cfg;
    threaded.threads = 3;
    CHECK(rows_to_csv(sweep(threaded)) == csv1);
}

TEST_CASE("success_probability matches the brute-force ratio") {
    std::vector<TrialResult> rows;
    for (double snr : {25.0, 15.0, 30.0}) {
        TrialResult r;
        r.solver = "bsl0";
        r.k = 5;
        r.l = 0;
        r.snr_db = snr;
        rows.push_back(r);
    }
    auto groups = success_probability(rows, 20.0);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rate == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(groups[0].count == 3);

    CHECK(success_probability(rows, -300.0)[0].rate == 1.0);
    CHECK(success_probability(rows, 1000.0)[0].rate == 0.0);

    rows[1].k = 7; // second group
    groups = success_probability(rows, 20.0);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].rate == 1.0);
    CHECK(groups[1].rate == 0.0);

    CHECK_THROWS_AS(success_probability({}, 20.0), std::invalid_argument);
}

TEST_CASE("csv round trip preserves rows exactly") {
    ExperimentConfig cfg = fast_config();
    const auto rows = sweep(cfg);
    const std::string csv = rows_to_csv(rows);
    const auto back = rows_from_csv(csv);
    REQUIRE(back.size() == rows.size());
    CHECK(rows_to_csv(back) == csv);
    CHECK(back[0].solver == rows[0].solver);
    CHECK(back[0].seed == rows[0].seed);

    const std::string header = "solver,K,L,trial,seed,snr_db,consistency,iterations,wall_time";
    CHECK(csv.substr(0, header.size()) == header);
    CHECK_THROWS_AS(rows_from_csv("bogus header\n"), std::invalid_argument);
    CHECK_THROWS_AS(rows_from_csv(header + "\nbsl0,1,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(rows_from_csv(header + "\nbsl0,x,0,0,1,1,1,1,0\n"), std::invalid_argument);
}

TEST_CASE("wall time column stays zero unless requested") {
    ExperimentConfig cfg = fast_config();
    cfg.trials = 1;
    const auto quiet = sweep(cfg);
    CHECK(quiet[0].wall_time == 0.0);

    cfg.record_wall_time = true;
    const auto timed = sweep(cfg);
    CHECK(timed[0].wall_time > 0.0);
}

TEST_CASE("svg reports are deterministic and well formed") {
    ExperimentConfig cfg = fast_config();
    cfg.k_list = {2, 3};
    const auto rows = sweep(cfg);

    const std::string svg = rows_to_svg(rows, ExperimentMode::Single, cfg.spec.band_width());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("bsl0") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(rows_to_svg(rows, ExperimentMode::Single, cfg.spec.band_width()) == svg);

    // fig3 style renders success rates against the sparsity factor
    const std::string f3 = rows_to_svg(rows, ExperimentMode::Fig3OctaveBand, 30);
    CHECK(f3.find("sparsity factor") != std::string::npos);
    CHECK(f3.find("success probability") != std::string::npos);

    CHECK_THROWS_AS(rows_to_svg({}, ExperimentMode::Single, 1), std::invalid_argument);
}

TEST_CASE("file helpers round trip and raise io_error on bad paths") {
    const std::string dir = std::filesystem::temp_directory_path().string();
    const std::string path = dir + "/lcrec_io_test.txt";
    write_text_file(path, "alpha\nbeta\n");
    CHECK(read_text_file(path) == "alpha\nbeta\n");
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_text_file(dir + "/does_not_exist_5190"), io_error);
    CHECK_THROWS_AS(write_text_file(dir + "/no_such_dir_5190/x.txt", "y"), io_error);
}

TEST_CASE("validate rejects inconsistent configurations") {
    ExperimentConfig cfg = fast_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = fast_config();
    cfg.k_list = {};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = fast_config();
    cfg.k_list = {31}; // wider than the band
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = fast_config();
    cfg.l_list = {1};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = fast_config();
    cfg.solvers = {"bsl0", "gradient_descent"};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = fast_config();
    cfg.threads = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = fast_config();
    cfg.omp_oversample = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
