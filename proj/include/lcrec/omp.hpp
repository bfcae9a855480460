#pragma once

#include "lcrec/sampling.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace lcrec {

struct underdetermined_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Crossing events reinterpreted as amplitude measurements: at each event the
// signal passed through the crossed level, so x(t_i) = value_i with t_i taken
// at the midpoint of the bracketing tick interval.
struct CrossingMeasurementSet {
    std::vector<double> times;
    Eigen::VectorXd values;
    Eigen::MatrixXd atoms; // row i = [cos(n omega0 t_i)]_{n=0..N}
    SignalSpec spec;

    int size() const { return static_cast<int>(times.size()); }
};

CrossingMeasurementSet crossing_measurements(const LCEventStream& stream, const SignalSpec& spec);

struct OmpResult {
    CoeffVector coeffs;
    std::vector<int> support;             // selection order
    std::vector<double> residual_norms;   // after each least-squares refit
    bool rank_deficient = false;          // minimum-norm solve was needed
};

// Greedy correlation pursuit with a least-squares refit on the active set each
// iteration. Correlations are normalized by column norm so unequal-norm atoms
// compete fairly; ties go to the lowest index. active_columns restricts the
// candidate dictionary (empty = all columns).
OmpResult omp_solve(const CrossingMeasurementSet& set, int k);
OmpResult omp_solve(const CrossingMeasurementSet& set, int k, const std::vector<int>& active_columns);

} // namespace lcrec
