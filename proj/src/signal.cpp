#include "lcrec/signal.hpp"

#include "lcrec/rng.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lcrec {

int SignalSpec::sample_count() const {
    const int m = static_cast<int>(std::lround(duration / sample_period)) + 1;
    const double covered = static_cast<double>(m - 1) * sample_period;
    if (std::abs(covered - duration) > 1e-9 * duration)
        throw std::invalid_argument("SignalSpec: duration is not an integer number of sample periods");
    return m;
}

void SignalSpec::validate() const {
    if (n_max < 0) throw std::invalid_argument("SignalSpec: n_max must be >= 0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("SignalSpec: omega0 must be positive");
    if (!(duration > 0.0)) throw std::invalid_argument("SignalSpec: duration must be positive");
    if (!(sample_period > 0.0)) throw std::invalid_argument("SignalSpec: sample_period must be positive");
    if (band_lo < 0 || band_hi > n_max || band_lo > band_hi)
        throw std::invalid_argument("SignalSpec: band must satisfy 0 <= band_lo <= band_hi <= n_max");
    (void)sample_count();
}

CoeffVector random_sparse_coeffs(const SignalSpec& spec, int k, bool include_dc,
                                 std::uint64_t rng_seed) {
    spec.validate();
    const int lo = (!include_dc && spec.band_lo == 0) ? 1 : spec.band_lo;
    const int width = spec.band_hi - lo + 1;
    if (width <= 0) throw std::invalid_argument("random_sparse_coeffs: empty candidate band");
    if (k < 1 || k > width) throw std::invalid_argument("random_sparse_coeffs: K outside [1, band width]");

    Rng rng(rng_seed);
    const std::vector<int> offsets = rng.sample_without_replacement(width, k);

    CoeffVector a = CoeffVector::Zero(spec.n_max + 1);
    for (int off : offsets) a[lo + off] = rng.normal();
    const double nrm = a.norm();
    if (nrm > 0.0) a /= nrm;
    return a;
}

double evaluate(const CoeffVector& coeffs, double omega0, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("evaluate: t must be finite");
    double acc = 0.0;
    for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
        if (coeffs[n] == 0.0) continue;
        acc += coeffs[n] * std::cos(static_cast<double>(n) * omega0 * t);
    }
    return acc;
}

Eigen::VectorXd uniform_sample(const CoeffVector& coeffs, const SignalSpec& spec) {
    spec.validate();
    const int m = spec.sample_count();
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i)
        x[i] = evaluate(coeffs, spec.omega0, static_cast<double>(i) * spec.sample_period);
    return x;
}

namespace {

double snr_from_norms(double ref_norm, double err_norm) {
    if (err_norm <= 1e-300) return 300.0;
    const double db = 20.0 * std::log10(ref_norm / err_norm);
    if (db > 300.0) return 300.0;
    if (db < -300.0) return -300.0;
    return db;
}

} // namespace

double reconstruction_snr(const CoeffVector& reference, const CoeffVector& estimate,
                          bool scale_invariant) {
    if (reference.size() != estimate.size())
        throw std::invalid_argument("reconstruction_snr: size mismatch");
    const double ref_norm = reference.norm();
    if (ref_norm == 0.0) throw std::invalid_argument("reconstruction_snr: zero reference");
    // an all-zero estimate is a failed reconstruction in either mode, not 0 dB
    if (!estimate.allFinite() || (estimate.array() == 0.0).all()) return -300.0;

    if (scale_invariant) {
        const double est_norm = estimate.norm();
        const double err = (reference / ref_norm - estimate / est_norm).norm();
        return snr_from_norms(1.0, err);
    }
    const double err = (reference - estimate).norm();
    return snr_from_norms(ref_norm, err);
}

std::pair<double, double> dynamic_range(const Eigen::VectorXd& samples) {
    if (samples.size() == 0) throw std::invalid_argument("dynamic_range: empty sample sequence");
    return {samples.minCoeff(), samples.maxCoeff()};
}

std::string coeffs_to_csv(const CoeffVector& coeffs) {
    std::string out;
    char buf[64];
    for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
        std::snprintf(buf, sizeof(buf), "%.17g", coeffs[n]);
        if (n) out += ',';
        out += buf;
    }
    return out;
}

CoeffVector coeffs_from_csv(const std::string& line) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        vals.push_back(v);
    }
    if (vals.empty()) throw std::invalid_argument("coeffs_from_csv: no values");
    CoeffVector a(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) a[static_cast<Eigen::Index>(i)] = vals[i];
    return a;
}

std::string coeffs_to_sparse_json(const CoeffVector& coeffs) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
        if (coeffs[n] == 0.0) continue;
        arr.push_back({{"n", static_cast<int>(n)}, {"a", coeffs[n]}});
    }
    return arr.dump();
}

CoeffVector coeffs_from_sparse_json(const std::string& text, int n_max) {
    try {
        const nlohmann::json arr = nlohmann::json::parse(text);
        if (!arr.is_array())
            throw std::invalid_argument("coeffs_from_sparse_json: expected an array");
        CoeffVector a = CoeffVector::Zero(n_max + 1);
        for (const auto& item : arr) {
            const int n = item.at("n").get<int>();
            if (n < 0 || n > n_max)
                throw std::invalid_argument("coeffs_from_sparse_json: index out of range");
            a[n] = item.at("a").get<double>();
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("coeffs_from_sparse_json: ") + e.what());
    }
}

} // namespace lcrec
