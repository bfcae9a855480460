#pragma once

#include "lcrec/signal.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace lcrec {

struct corrupt_stream_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MeasurementKind { ZC, LC };

// Measurement matrix plus the sign vector it produced. For ZC, phi is the
// M x (N+1) cosine dictionary; for LC it is the stacked (M(L+1)) x (N+L+2)
// system whose last L+1 columns carry the level constants.
struct MeasurementEnsemble {
    Eigen::MatrixXd phi;
    Eigen::VectorXd signs;
    MeasurementKind kind = MeasurementKind::ZC;
    std::vector<double> levels; // ascending, L+1 values; empty for ZC
    SignalSpec spec;
};

// Event-stream form of the LC measurements: per-level initial signs plus the
// ticks where each level's sign flips. Levels are stored ascending; an event's
// level_index is the signed index k in [-L/2, L/2], level = levels[k + L/2].
struct LCEvent {
    int tick = 0;        // in [1, M-1]
    int level_index = 0; // signed, in [-L/2, L/2]
    int direction = 0;   // new sign after the flip, +1 or -1
};

struct LCEventStream {
    std::vector<double> levels;
    double sample_period = 0.0;
    int sample_count = 0;           // M
    std::vector<int> initial_signs; // one per level, ascending level order
    std::vector<LCEvent> events;    // sorted by tick, then level_index

    int level_count() const { return static_cast<int>(levels.size()) - 1; } // L
};

// Entry [m][n] = cos(n * omega0 * m * T), m = 0..M-1; column 0 is all ones.
Eigen::MatrixXd build_phi(const SignalSpec& spec);

// Element-wise sign with sign(0) := +1.
Eigen::VectorXd sign_measure(const Eigen::VectorXd& samples);

// L+1 interior points of (min, max): l_k = min + (k + L/2 + 1)(max-min)/(L+2).
// Endpoints of the range are never levels. L must be even.
std::vector<double> uniform_levels(std::pair<double, double> range, int level_count);

// Stacked system: block-row i holds a copy of phi with level column N+1+i set
// to the i-th level in descending order (largest level first, matching the
// stacking order of lc_measure).
Eigen::MatrixXd build_phi_prime(const Eigen::MatrixXd& phi, const std::vector<double>& levels);

// Concatenation of sign_measure(samples - l), largest level first.
Eigen::VectorXd lc_measure(const Eigen::VectorXd& samples, const std::vector<double>& levels);

// Lossless event encoding of the per-level sign sequences. sample_period is
// recorded in the header so the stream is self-describing.
LCEventStream encode_lc_events(const Eigen::VectorXd& samples, const std::vector<double>& levels,
                               double sample_period);

// Replays the stream back to the stacked sign vector (lc_measure order).
// Malformed streams (out-of-range tick or level, duplicate (tick, level))
// raise corrupt_stream_error.
Eigen::VectorXd decode_lc_events(const LCEventStream& stream);

// Line-oriented text form: header lines levels=, T=, M=, init=, then one
// "tick,level_index,direction" line per event.
std::string lc_stream_to_text(const LCEventStream& stream);
LCEventStream lc_stream_from_text(const std::string& text);

MeasurementEnsemble make_zc_ensemble(const SignalSpec& spec, const Eigen::VectorXd& samples);
MeasurementEnsemble make_lc_ensemble(const SignalSpec& spec, const Eigen::VectorXd& samples,
                                     const std::vector<double>& levels);

} // namespace lcrec
