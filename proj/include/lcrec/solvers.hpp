#pragma once

#include "lcrec/sampling.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace lcrec {

struct Bsl0Params {
    double sigma0 = 0.1;
    double lambda0 = 2.5e-4;
    double theta0 = 0.3;
    double alpha = 0.9;   // sigma decay, in (0, 1)
    double beta = 2.0;    // lambda growth per outer pass, > 1
    double delta = 2.0;   // theta growth per outer pass, > 1
    double sigma_min = 1e-3;
    double mu = 0.7;      // gradient step size
    double epsilon = 5e-4;
    int iter_max = 50;

    // Replaces the norm-penalty term theta(|a|^2-1)a by the analytic gradient
    // 4 theta(|a|^2-1)a of theta(|a|^2-1)^2.
    bool exact_penalty_gradient = false;
    // Subsequent outer passes continue the sigma schedule at sigma_min instead
    // of resetting to sigma0 (one refinement step per pass).
    bool continue_sigma = false;

    void validate() const; // throws std::invalid_argument
};

struct CostTerms {
    double f_sigma = 0.0;      // evaluated at sigma = 1e-3 (sparsity proxy)
    double j = 0.0;            // consistency cost on the ensemble rows
    double norm_penalty = 0.0; // (|a|^2-1)^2 for ZC; max tail deviation from -1 for LC
};

struct SolveTrace {
    Eigen::VectorXd estimate;
    int iterations = 0;
    CostTerms final_cost_terms;
    double sign_consistency = 0.0; // fraction of rows with sign(phi a) == y
    bool converged = false;
    bool guard_tripped = false; // a step went non-finite; last finite iterate kept
    std::map<std::string, double> params_echo;

    // filled only when the solver runs with verbose tracing
    std::vector<double> consistency_per_iter;
    std::vector<int> head_support_per_iter;   // nonzeros in the head (LC solvers)
    std::vector<char> tail_feasible_per_iter; // tail exactly -1 (LC solvers)
};

std::string trace_to_json(const SolveTrace& trace);

// sum_m (1 - exp(-a_m^2 / sigma^2)), in [0, len(a)].
double f_sigma(const Eigen::VectorXd& a, double sigma);

// sum_m max(0, -y_m (phi a)_m); zero exactly when sign-consistent.
double consistency_cost(const Eigen::VectorXd& a, const Eigen::MatrixXd& phi,
                        const Eigen::VectorXd& y);

// (2/sigma^2) e^{-a^2/sigma^2} a + (lambda/2) phi^T (sign(phi a) - y)
// + theta (|a|^2 - 1) a, the printed subgradient. exact_penalty swaps the last
// term for 4 theta (|a|^2 - 1) a.
Eigen::VectorXd bsl0_gradient(const Eigen::VectorXd& a, const Eigen::MatrixXd& phi,
                              const Eigen::VectorXd& y, double sigma, double lambda,
                              double theta, bool exact_penalty = false);

// Keeps the K largest-magnitude entries (ties to the lowest index), zeros the rest.
Eigen::VectorXd hard_threshold(const Eigen::VectorXd& v, int k);

// Smoothed-L0 descent with consistency and unit-norm penalties escalated each
// outer pass. The iteration count is the number of gradient steps; the outer
// loop re-checks it only between sigma sweeps. The step direction scales the
// sparsity term by sigma^2 (see README, solver notes); the returned estimate
// is unit-normalized.
SolveTrace bsl0_zc(const MeasurementEnsemble& ensemble, const Bsl0Params& params,
                   bool verbose_trace = false);

// Binary iterative hard thresholding: a <- eta_K(a - mu/2 phi^T(sign(phi a)-y)),
// unit-normalized at the end. mu <= 0 selects the default 1/rows.
SolveTrace biht_zc(const MeasurementEnsemble& ensemble, int k, double mu, double epsilon,
                   int iter_max, bool verbose_trace = false);

} // namespace lcrec
