#pragma once

#include "lcrec/lc_solvers.hpp"
#include "lcrec/omp.hpp"
#include "lcrec/sampling.hpp"
#include "lcrec/signal.hpp"
#include "lcrec/solvers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lcrec {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentMode { Fig1ZcSweep, Fig2LcSweep, Fig3OctaveBand, Single };

std::string mode_name(ExperimentMode mode);
ExperimentMode mode_from_name(const std::string& name); // accepts long and short forms

struct BihtParams {
    double mu = 0.0; // <= 0 selects the per-kind default (1/rows ZC, 5/rows LC)
    double epsilon = 5e-4;
    int iter_max = 50;
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Single;
    SignalSpec spec;
    std::vector<int> k_list{10};
    std::vector<int> l_list{0};
    std::vector<std::string> solvers{"bsl0"};
    int trials = 1;
    std::uint64_t master_seed = 1;
    double success_threshold_db = 20.0;
    bool include_dc = false;

    // fig3 behavior: every solver works on the [band_lo, band_hi] columns only
    bool restrict_dictionary_to_band = false;
    // wall_time is written as 0 unless enabled, so re-runs stay byte-identical
    bool record_wall_time = false;

    Bsl0Params bsl0;
    Bsl0Params bsl0_lc;
    BihtParams biht;
    BihtParams biht_lc;
    int omp_oversample = 1; // event-timer refinement factor for the OMP baseline

    int threads = 1;

    void validate() const; // throws std::invalid_argument
};

// Protocol presets for each mode (fig3 narrows the band to [201, 400],
// restricts the dictionary, and oversamples the OMP event timer 16x).
ExperimentConfig preset_config(ExperimentMode mode, std::uint64_t master_seed);

// JSON round-trip; parsing starts from the preset for the named mode and
// overlays the remaining fields. Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct TrialResult {
    std::string solver;
    int k = 0;
    int l = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double snr_db = -300.0;
    double consistency = 0.0;
    int iterations = 0;
    double wall_time = 0.0;
};

// One trial at the head of K_list/L_list; one row per configured solver, in
// config order. Solver failures become snr_db = -300 rows, never aborts.
std::vector<TrialResult> run_trial(const ExperimentConfig& config, int trial_index);

// Full cross-product K_list x L_list x trials, rows ordered by
// (solver, K, L, trial). Deterministic for a fixed master seed regardless of
// the thread count.
std::vector<TrialResult> sweep(const ExperimentConfig& config);

struct GroupRate {
    std::string solver;
    int k = 0;
    int l = 0;
    double rate = 0.0; // fraction of rows with snr_db strictly above threshold
    int count = 0;
};

std::vector<GroupRate> success_probability(const std::vector<TrialResult>& rows,
                                           double threshold_db);

// Fixed header solver,K,L,trial,seed,snr_db,consistency,iterations,wall_time.
std::string rows_to_csv(const std::vector<TrialResult>& rows);
std::vector<TrialResult> rows_from_csv(const std::string& text);
void emit_report_csv(const std::vector<TrialResult>& rows, const std::string& path);

// Mean-SNR curves (fig1/fig2/single) or success-vs-sparsity-factor (fig3,
// factor = K / band width).
std::string rows_to_svg(const std::vector<TrialResult>& rows, ExperimentMode mode,
                        int band_width);
void emit_report_svg(const std::vector<TrialResult>& rows, ExperimentMode mode,
                     int band_width, const std::string& path);

std::string read_text_file(const std::string& path); // io_error on failure
void write_text_file(const std::string& path, const std::string& content);

// SolveTrace for a single already-built instance; used by the solve subcommand.
SolveTrace solve_instance(const std::string& solver, const ExperimentConfig& config,
                          const MeasurementEnsemble& ensemble, int k, bool verbose_trace);

} // namespace lcrec
