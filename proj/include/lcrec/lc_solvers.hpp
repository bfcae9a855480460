#pragma once

#include "lcrec/solvers.hpp"

namespace lcrec {

// Euclidean projection onto the feasible set of the stacked system: the last
// tail_len entries are pinned to -1, the head is untouched. Idempotent.
Eigen::VectorXd project_onto_c(Eigen::VectorXd a_prime, int tail_len);

// Hard-thresholding descent on the stacked LC system. Each iteration runs
// GD -> eta_K on the head -> projection; the estimate is the head, unscaled
// (the level columns pin the overall scale). mu <= 0 selects the default
// 5/rows; see README, solver notes.
SolveTrace biht_lc(const MeasurementEnsemble& ensemble, int k, double mu, double epsilon,
                   int iter_max, bool verbose_trace = false);

// Smoothed-L0 descent on the stacked system: no norm-penalty term (theta0 and
// delta are ignored), projection after every step, head returned unscaled.
// The consistency weight is lambda0 / (L+1) so the escalation schedule is
// independent of the level count; see README, solver notes.
SolveTrace bsl0_lc(const MeasurementEnsemble& ensemble, const Bsl0Params& params,
                   bool verbose_trace = false);

} // namespace lcrec
