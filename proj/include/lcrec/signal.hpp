#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>

namespace lcrec {

// Coefficients of x(t) = sum_n a[n] cos(n w0 t), index n = 0..N.
using CoeffVector = Eigen::VectorXd;

struct SignalSpec {
    int n_max = 500;             // highest harmonic index N
    double omega0 = 10.0;        // fundamental frequency, rad/s
    double duration = 2.0;       // observation window, s
    double sample_period = 5e-4; // uniform grid tick T, s
    int band_lo = 1;             // allowed support band, inclusive
    int band_hi = 500;

    int band_width() const { return band_hi - band_lo + 1; }

    // M such that (M-1)*sample_period covers duration; the grid must land on
    // the window end to 1e-9 relative or the spec is rejected.
    int sample_count() const;

    void validate() const; // throws std::invalid_argument
};

// Unit-norm coefficient vector with exactly K nonzeros. Support is drawn
// uniformly without replacement from [band_lo, band_hi] (index 0 additionally
// excluded when include_dc is false); values are i.i.d. standard normal before
// normalization. Deterministic in rng_seed.
CoeffVector random_sparse_coeffs(const SignalSpec& spec, int k, bool include_dc,
                                 std::uint64_t rng_seed);

// x(t) at a single instant. Zero coefficients are skipped; the skipped terms
// are exact zeros, so the sum is unchanged.
double evaluate(const CoeffVector& coeffs, double omega0, double t);

// x(mT) for m = 0..M-1.
Eigen::VectorXd uniform_sample(const CoeffVector& coeffs, const SignalSpec& spec);

// 20*log10 of reference norm over error norm, clamped to [-300, 300].
// scale_invariant compares unit-normalized copies (sign reconstruction leaves
// scale free); a zero or non-finite estimate scores -300.
double reconstruction_snr(const CoeffVector& reference, const CoeffVector& estimate,
                          bool scale_invariant);

// (min, max) over the sample sequence; empty input is rejected.
std::pair<double, double> dynamic_range(const Eigen::VectorXd& samples);

// One CSV row of N+1 values / the sparse [{"n": idx, "a": value}, ...] form.
std::string coeffs_to_csv(const CoeffVector& coeffs);
CoeffVector coeffs_from_csv(const std::string& line);
std::string coeffs_to_sparse_json(const CoeffVector& coeffs);
CoeffVector coeffs_from_sparse_json(const std::string& text, int n_max);

} // namespace lcrec
