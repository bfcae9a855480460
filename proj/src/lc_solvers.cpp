#include "lcrec/lc_solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace lcrec {

Eigen::VectorXd project_onto_c(Eigen::VectorXd a_prime, int tail_len) {
    if (tail_len < 0 || tail_len > a_prime.size())
        throw std::invalid_argument("project_onto_c: tail length out of range");
    a_prime.tail(tail_len).setConstant(-1.0);
    return a_prime;
}

namespace {

double fraction_consistent(const Eigen::VectorXd& z, const Eigen::VectorXd& y) {
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double s = (z[i] < 0.0) ? -1.0 : 1.0;
        if (s == y[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(z.size());
}

int head_support(const Eigen::VectorXd& a, Eigen::Index head_len) {
    int nz = 0;
    for (Eigen::Index i = 0; i < head_len; ++i)
        if (a[i] != 0.0) ++nz;
    return nz;
}

bool tail_feasible(const Eigen::VectorXd& a, Eigen::Index head_len) {
    for (Eigen::Index i = head_len; i < a.size(); ++i)
        if (a[i] != -1.0) return false;
    return true;
}

void record_verbose(SolveTrace& trace, const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& a, Eigen::Index head_len) {
    trace.consistency_per_iter.push_back(fraction_consistent(phi * a, y));
    trace.head_support_per_iter.push_back(head_support(a, head_len));
    trace.tail_feasible_per_iter.push_back(tail_feasible(a, head_len) ? 1 : 0);
}

void finish_lc_trace(SolveTrace& trace, const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& a, Eigen::Index head_len) {
    trace.sign_consistency = fraction_consistent(phi * a, y);
    trace.final_cost_terms.f_sigma = f_sigma(a, 1e-3);
    trace.final_cost_terms.j = consistency_cost(a, phi, y);
    double worst = 0.0;
    for (Eigen::Index i = head_len; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] + 1.0));
    trace.final_cost_terms.norm_penalty = worst;
    trace.estimate = a.head(head_len);
}

} // namespace

SolveTrace biht_lc(const MeasurementEnsemble& ensemble, int k, double mu, double epsilon,
                   int iter_max, bool verbose_trace) {
    if (ensemble.kind != MeasurementKind::LC)
        throw std::invalid_argument("biht_lc: ensemble kind must be LC");
    const Eigen::MatrixXd& phi = ensemble.phi;
    const Eigen::VectorXd& y = ensemble.signs;
    if (phi.rows() != y.size()) throw std::invalid_argument("biht_lc: sign count mismatch");
    const Eigen::Index tail_len = static_cast<Eigen::Index>(ensemble.levels.size());
    if (tail_len < 1 || tail_len >= phi.cols())
        throw std::invalid_argument("biht_lc: ensemble levels inconsistent with phi");
    const Eigen::Index head_len = phi.cols() - tail_len;
    if (k < 1 || k > head_len) throw std::invalid_argument("biht_lc: K outside [1, head length]");
    if (!(epsilon > 0.0)) throw std::invalid_argument("biht_lc: epsilon must be positive");
    if (iter_max < 1) throw std::invalid_argument("biht_lc: iter_max must be at least 1");
    if (mu <= 0.0) mu = 5.0 / static_cast<double>(phi.rows());

    Eigen::VectorXd a = project_onto_c(Eigen::VectorXd::Zero(phi.cols()), static_cast<int>(tail_len));
    Eigen::VectorXd a_prev = Eigen::VectorXd::Constant(phi.cols(), -100.0);
    int steps = 0;
    bool guard = false;
    SolveTrace trace;

    while ((a - a_prev).norm() > epsilon && steps < iter_max) {
        const Eigen::VectorXd g = 0.5 * (phi.transpose() * (sign_measure(phi * a) - y));
        Eigen::VectorXd a_next = a - mu * g;
        if (!a_next.allFinite()) {
            guard = true;
            break;
        }
        a_next.head(head_len) = hard_threshold(a_next.head(head_len), k);
        a_next = project_onto_c(std::move(a_next), static_cast<int>(tail_len));
        a_prev = a;
        a = a_next;
        ++steps;
        if (verbose_trace) record_verbose(trace, phi, y, a, head_len);
    }

    trace.converged = ((a - a_prev).norm() <= epsilon) && !guard;
    trace.guard_tripped = guard;
    trace.iterations = steps;
    finish_lc_trace(trace, phi, y, a, head_len);
    trace.params_echo = {{"K", static_cast<double>(k)}, {"mu", mu},
                         {"epsilon", epsilon}, {"iter_max", static_cast<double>(iter_max)},
                         {"L", static_cast<double>(tail_len - 1)}};
    return trace;
}

SolveTrace bsl0_lc(const MeasurementEnsemble& ensemble, const Bsl0Params& params,
                   bool verbose_trace) {
    params.validate();
    if (ensemble.kind != MeasurementKind::LC)
        throw std::invalid_argument("bsl0_lc: ensemble kind must be LC");
    const Eigen::MatrixXd& phi = ensemble.phi;
    const Eigen::VectorXd& y = ensemble.signs;
    if (phi.rows() != y.size()) throw std::invalid_argument("bsl0_lc: sign count mismatch");
    const Eigen::Index tail_len = static_cast<Eigen::Index>(ensemble.levels.size());
    if (tail_len < 1 || tail_len >= phi.cols())
        throw std::invalid_argument("bsl0_lc: ensemble levels inconsistent with phi");
    const Eigen::Index head_len = phi.cols() - tail_len;

    // consistency weight per level block, so L does not inflate the step
    const double lambda_scale = 1.0 / static_cast<double>(tail_len);

    Eigen::VectorXd a = project_onto_c(Eigen::VectorXd::Zero(phi.cols()), static_cast<int>(tail_len));
    Eigen::VectorXd a_prev = Eigen::VectorXd::Constant(phi.cols(), -100.0);
    double lambda = params.lambda0 * lambda_scale;
    int k = 0;
    bool guard = false;
    bool first_pass = true;
    SolveTrace trace;

    while ((a - a_prev).norm() > params.epsilon && k < params.iter_max && !guard) {
        double sigma = (params.continue_sigma && !first_pass) ? params.sigma_min : params.sigma0;
        first_pass = false;
        while (sigma > params.sigma_min * (params.continue_sigma ? (1.0 - 1e-12) : 1.0)) {
            const double s2 = sigma * sigma;
            Eigen::VectorXd g =
                (2.0 * (-a.array().square() / s2).exp() * a.array()).matrix();
            g += (lambda / 2.0) * (phi.transpose() * (sign_measure(phi * a) - y));

            Eigen::VectorXd a_next = a - params.mu * g;
            if (!a_next.allFinite()) {
                guard = true;
                break;
            }
            a_next = project_onto_c(std::move(a_next), static_cast<int>(tail_len));
            a_prev = a;
            a = a_next;
            sigma *= params.alpha;
            ++k;
            if (verbose_trace) record_verbose(trace, phi, y, a, head_len);
        }
        lambda *= params.beta;
    }

    trace.converged = ((a - a_prev).norm() <= params.epsilon) && !guard;
    trace.guard_tripped = guard;
    trace.iterations = k;
    finish_lc_trace(trace, phi, y, a, head_len);
    trace.params_echo = {{"sigma0", params.sigma0}, {"lambda0", params.lambda0},
                         {"lambda_effective", params.lambda0 * lambda_scale},
                         {"alpha", params.alpha},   {"beta", params.beta},
                         {"sigma_min", params.sigma_min}, {"mu", params.mu},
                         {"epsilon", params.epsilon},
                         {"iter_max", static_cast<double>(params.iter_max)},
                         {"L", static_cast<double>(tail_len - 1)}};
    return trace;
}

} // namespace lcrec
