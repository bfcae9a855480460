#include "lcrec/solvers.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lcrec {

void Bsl0Params::validate() const {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("Bsl0Params: sigma0 must be positive");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("Bsl0Params: lambda0 must be positive");
    if (!(theta0 > 0.0)) throw std::invalid_argument("Bsl0Params: theta0 must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("Bsl0Params: alpha must lie in (0,1)");
    if (!(beta > 1.0)) throw std::invalid_argument("Bsl0Params: beta must exceed 1");
    if (!(delta > 1.0)) throw std::invalid_argument("Bsl0Params: delta must exceed 1");
    if (!(sigma_min > 0.0)) throw std::invalid_argument("Bsl0Params: sigma_min must be positive");
    if (!(sigma_min < sigma0)) throw std::invalid_argument("Bsl0Params: sigma_min must be below sigma0");
    if (!(mu > 0.0)) throw std::invalid_argument("Bsl0Params: mu must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("Bsl0Params: epsilon must be positive");
    if (iter_max < 1) throw std::invalid_argument("Bsl0Params: iter_max must be at least 1");
}

double f_sigma(const Eigen::VectorXd& a, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("f_sigma: sigma must be positive");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        acc += 1.0 - std::exp(-a[i] * a[i] / (sigma * sigma));
    return acc;
}

double consistency_cost(const Eigen::VectorXd& a, const Eigen::MatrixXd& phi,
                        const Eigen::VectorXd& y) {
    if (phi.cols() != a.size() || phi.rows() != y.size())
        throw std::invalid_argument("consistency_cost: dimension mismatch");
    const Eigen::VectorXd z = phi * a;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) acc += std::max(0.0, -y[i] * z[i]);
    return acc;
}

Eigen::VectorXd bsl0_gradient(const Eigen::VectorXd& a, const Eigen::MatrixXd& phi,
                              const Eigen::VectorXd& y, double sigma, double lambda,
                              double theta, bool exact_penalty) {
    if (!(sigma > 0.0)) throw std::invalid_argument("bsl0_gradient: sigma must be positive");
    if (phi.cols() != a.size() || phi.rows() != y.size())
        throw std::invalid_argument("bsl0_gradient: dimension mismatch");
    const double s2 = sigma * sigma;
    Eigen::VectorXd g = (2.0 / s2) * (-a.array().square() / s2).exp().matrix().asDiagonal() * a;
    g += (lambda / 2.0) * (phi.transpose() * (sign_measure(phi * a) - y));
    const double shell = a.squaredNorm() - 1.0;
    g += (exact_penalty ? 4.0 * theta * shell : theta * shell) * a;
    return g;
}

Eigen::VectorXd hard_threshold(const Eigen::VectorXd& v, int k) {
    const int n = static_cast<int>(v.size());
    if (k < 0 || k > n) throw std::invalid_argument("hard_threshold: K outside [0, len(v)]");
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&v](int i, int j) {
        return std::abs(v[i]) > std::abs(v[j]); // stable: ties keep the lower index
    });
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) out[order[static_cast<size_t>(i)]] = v[order[static_cast<size_t>(i)]];
    return out;
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

} // namespace

SolveTrace bsl0_zc(const MeasurementEnsemble& ensemble, const Bsl0Params& params,
                   bool verbose_trace) {
    params.validate();
    if (ensemble.kind != MeasurementKind::ZC)
        throw std::invalid_argument("bsl0_zc: ensemble kind must be ZC");
    const Eigen::MatrixXd& phi = ensemble.phi;
    const Eigen::VectorXd& y = ensemble.signs;
    if (phi.rows() != y.size()) throw std::invalid_argument("bsl0_zc: sign count mismatch");
    const Eigen::Index n = phi.cols();

    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd a_prev = Eigen::VectorXd::Constant(n, -100.0);
    double lambda = params.lambda0;
    double theta = params.theta0;
    int k = 0;
    bool guard = false;
    bool first_pass = true;
    SolveTrace trace;

    while ((a - a_prev).norm() > params.epsilon && k < params.iter_max && !guard) {
        double sigma = (params.continue_sigma && !first_pass) ? params.sigma_min : params.sigma0;
        first_pass = false;
        while (sigma > params.sigma_min * (params.continue_sigma ? (1.0 - 1e-12) : 1.0)) {
            const double s2 = sigma * sigma;
            // sparsity term carries the sigma^2 scale (stabilized step); the
            // consistency and shell terms keep their printed weights
            Eigen::VectorXd g =
                (2.0 * (-a.array().square() / s2).exp() * a.array()).matrix();
            g += (lambda / 2.0) * (phi.transpose() * (sign_measure(phi * a) - y));
            const double shell = a.squaredNorm() - 1.0;
            g += (params.exact_penalty_gradient ? 4.0 * theta * shell : theta * shell) * a;

            const Eigen::VectorXd a_next = a - params.mu * g;
            if (!a_next.allFinite()) {
                guard = true;
                break;
            }
            a_prev = a;
            a = a_next;
            sigma *= params.alpha;
            ++k;
            if (verbose_trace) trace.consistency_per_iter.push_back(fraction_consistent(phi * a, y));
        }
        lambda *= params.beta;
        theta *= params.delta;
    }

    trace.converged = ((a - a_prev).norm() <= params.epsilon) && !guard;
    trace.guard_tripped = guard;
    trace.iterations = k;
    trace.sign_consistency = fraction_consistent(phi * a, y);
    trace.final_cost_terms.f_sigma = f_sigma(a, 1e-3);
    trace.final_cost_terms.j = consistency_cost(a, phi, y);
    const double shell = a.squaredNorm() - 1.0;
    trace.final_cost_terms.norm_penalty = shell * shell;
    const double nrm = a.norm();
    trace.estimate = (nrm > 0.0) ? Eigen::VectorXd(a / nrm) : a;
    trace.params_echo = {{"sigma0", params.sigma0}, {"lambda0", params.lambda0},
                         {"theta0", params.theta0}, {"alpha", params.alpha},
                         {"beta", params.beta},     {"delta", params.delta},
                         {"sigma_min", params.sigma_min}, {"mu", params.mu},
                         {"epsilon", params.epsilon},
                         {"iter_max", static_cast<double>(params.iter_max)}};
    return trace;
}

SolveTrace biht_zc(const MeasurementEnsemble& ensemble, int k, double mu, double epsilon,
                   int iter_max, bool verbose_trace) {
    if (ensemble.kind != MeasurementKind::ZC)
        throw std::invalid_argument("biht_zc: ensemble kind must be ZC");
    const Eigen::MatrixXd& phi = ensemble.phi;
    const Eigen::VectorXd& y = ensemble.signs;
    if (phi.rows() != y.size()) throw std::invalid_argument("biht_zc: sign count mismatch");
    const Eigen::Index n = phi.cols();
    if (k < 1 || k > n) throw std::invalid_argument("biht_zc: K outside [1, columns]");
    if (!(epsilon > 0.0)) throw std::invalid_argument("biht_zc: epsilon must be positive");
    if (iter_max < 1) throw std::invalid_argument("biht_zc: iter_max must be at least 1");
    if (mu <= 0.0) mu = 1.0 / static_cast<double>(phi.rows());

    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd a_prev = Eigen::VectorXd::Constant(n, -100.0);
    int steps = 0;
    bool guard = false;
    SolveTrace trace;

    while ((a - a_prev).norm() > epsilon && steps < iter_max) {
        const Eigen::VectorXd g = 0.5 * (phi.transpose() * (sign_measure(phi * a) - y));
        const Eigen::VectorXd a_next = hard_threshold(a - mu * g, k);
        if (!a_next.allFinite()) {
            guard = true;
            break;
        }
        a_prev = a;
        a = a_next;
        ++steps;
        if (verbose_trace) trace.consistency_per_iter.push_back(fraction_consistent(phi * a, y));
    }

    trace.converged = ((a - a_prev).norm() <= epsilon) && !guard;
    trace.guard_tripped = guard;
    trace.iterations = steps;
    trace.sign_consistency = fraction_consistent(phi * a, y);
    trace.final_cost_terms.f_sigma = f_sigma(a, 1e-3);
    trace.final_cost_terms.j = consistency_cost(a, phi, y);
    const double shell = a.squaredNorm() - 1.0;
    trace.final_cost_terms.norm_penalty = shell * shell;
    const double nrm = a.norm();
    trace.estimate = (nrm > 0.0) ? Eigen::VectorXd(a / nrm) : a;
    trace.params_echo = {{"K", static_cast<double>(k)}, {"mu", mu},
                         {"epsilon", epsilon}, {"iter_max", static_cast<double>(iter_max)}};
    return trace;
}

std::string trace_to_json(const SolveTrace& trace) {
    nlohmann::json j;
    j["estimate"] = std::vector<double>(trace.estimate.data(),
                                        trace.estimate.data() + trace.estimate.size());
    j["iterations"] = trace.iterations;
    j["final_cost_terms"] = {{"F_sigma", trace.final_cost_terms.f_sigma},
                             {"J", trace.final_cost_terms.j},
                             {"norm_penalty", trace.final_cost_terms.norm_penalty}};
    j["sign_consistency"] = trace.sign_consistency;
    j["converged"] = trace.converged;
    j["guard_tripped"] = trace.guard_tripped;
    j["params"] = trace.params_echo;
    if (!trace.consistency_per_iter.empty()) j["consistency_per_iter"] = trace.consistency_per_iter;
    if (!trace.head_support_per_iter.empty()) j["head_support_per_iter"] = trace.head_support_per_iter;
    if (!trace.tail_feasible_per_iter.empty()) {
        std::vector<bool> flags(trace.tail_feasible_per_iter.begin(),
                                trace.tail_feasible_per_iter.end());
        j["tail_feasible_per_iter"] = flags;
    }
    return j.dump(2);
}

} // namespace lcrec
