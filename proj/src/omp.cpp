#include "lcrec/omp.hpp"

#include <cmath>
#include <limits>

namespace lcrec {

CrossingMeasurementSet crossing_measurements(const LCEventStream& stream, const SignalSpec& spec) {
    spec.validate();
    if (stream.levels.empty()) throw std::invalid_argument("crossing_measurements: stream has no levels");
    const int half = stream.level_count() / 2;

    CrossingMeasurementSet set;
    set.spec = spec;
    const int count = static_cast<int>(stream.events.size());
    set.times.reserve(static_cast<size_t>(count));
    set.values.resize(count);
    set.atoms.resize(count, spec.n_max + 1);

    for (int i = 0; i < count; ++i) {
        const LCEvent& ev = stream.events[static_cast<size_t>(i)];
        const int li = ev.level_index + half;
        if (li < 0 || li >= static_cast<int>(stream.levels.size()))
            throw corrupt_stream_error("crossing_measurements: event level index out of range");
        const double t = static_cast<double>(ev.tick) * stream.sample_period - stream.sample_period / 2.0;
        set.times.push_back(t);
        set.values[i] = stream.levels[static_cast<size_t>(li)];
        for (int n = 0; n <= spec.n_max; ++n)
            set.atoms(i, n) = std::cos(static_cast<double>(n) * spec.omega0 * t);
    }
    return set;
}

OmpResult omp_solve(const CrossingMeasurementSet& set, int k) {
    return omp_solve(set, k, {});
}

OmpResult omp_solve(const CrossingMeasurementSet& set, int k, const std::vector<int>& active_columns) {
    if (k < 1) throw std::invalid_argument("omp_solve: K must be at least 1");
    if (set.size() < k)
        throw underdetermined_error("omp_solve: fewer crossings than K");

    std::vector<int> candidates = active_columns;
    if (candidates.empty()) {
        candidates.resize(static_cast<size_t>(set.atoms.cols()));
        for (size_t i = 0; i < candidates.size(); ++i) candidates[i] = static_cast<int>(i);
    }
    for (int c : candidates)
        if (c < 0 || c >= set.atoms.cols())
            throw std::invalid_argument("omp_solve: active column out of range");

    Eigen::VectorXd col_norms(static_cast<Eigen::Index>(candidates.size()));
    for (size_t i = 0; i < candidates.size(); ++i) {
        const double nrm = set.atoms.col(candidates[i]).norm();
        col_norms[static_cast<Eigen::Index>(i)] = (nrm > 0.0) ? nrm : std::numeric_limits<double>::infinity();
    }

    OmpResult res;
    res.coeffs = CoeffVector::Zero(set.atoms.cols());
    Eigen::VectorXd residual = set.values;
    std::vector<char> used(candidates.size(), 0);
    Eigen::MatrixXd active(set.atoms.rows(), 0);
    Eigen::VectorXd coef;

    for (int it = 0; it < k; ++it) {
        // best normalized correlation; ties and unavailable columns resolve to
        // the lowest candidate index by the strict > comparison
        int best = -1;
        double best_score = -1.0;
        for (size_t i = 0; i < candidates.size(); ++i) {
            if (used[i]) continue;
            const double score =
                std::abs(set.atoms.col(candidates[i]).dot(residual)) / col_norms[static_cast<Eigen::Index>(i)];
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) break;
        used[static_cast<size_t>(best)] = 1;
        res.support.push_back(candidates[static_cast<size_t>(best)]);

        active.conservativeResize(Eigen::NoChange, active.cols() + 1);
        active.col(active.cols() - 1) = set.atoms.col(candidates[static_cast<size_t>(best)]);

        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(active);
        if (cod.rank() < active.cols()) res.rank_deficient = true;
        coef = cod.solve(set.values);
        residual = set.values - active * coef;
        res.residual_norms.push_back(residual.norm());
    }

    for (size_t i = 0; i < res.support.size(); ++i)
        res.coeffs[res.support[i]] = coef[static_cast<Eigen::Index>(i)];
    return res;
}

} // namespace lcrec
