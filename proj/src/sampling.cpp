#include "lcrec/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lcrec {

Eigen::MatrixXd build_phi(const SignalSpec& spec) {
    spec.validate();
    const int m = spec.sample_count();
    const int cols = spec.n_max + 1;
    Eigen::MatrixXd phi(m, cols);
    for (int r = 0; r < m; ++r) {
        const double t = static_cast<double>(r) * spec.sample_period;
        for (int n = 0; n < cols; ++n)
            phi(r, n) = std::cos(static_cast<double>(n) * spec.omega0 * t);
    }
    return phi;
}

Eigen::VectorXd sign_measure(const Eigen::VectorXd& samples) {
    Eigen::VectorXd y(samples.size());
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        y[i] = (samples[i] < 0.0) ? -1.0 : 1.0;
    return y;
}

std::vector<double> uniform_levels(std::pair<double, double> range, int level_count) {
    const auto [lo, hi] = range;
    if (!(lo < hi)) throw std::invalid_argument("uniform_levels: min must be below max");
    if (level_count < 0 || level_count % 2 != 0)
        throw std::invalid_argument("uniform_levels: L must be even and non-negative");
    const int half = level_count / 2;
    std::vector<double> levels;
    levels.reserve(level_count + 1);
    for (int k = -half; k <= half; ++k)
        levels.push_back(lo + static_cast<double>(k + half + 1) * (hi - lo) /
                                  static_cast<double>(level_count + 2));
    return levels;
}

Eigen::MatrixXd build_phi_prime(const Eigen::MatrixXd& phi, const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("build_phi_prime: empty level set");
    const Eigen::Index m = phi.rows();
    const Eigen::Index head = phi.cols();
    const Eigen::Index blocks = static_cast<Eigen::Index>(levels.size());
    Eigen::MatrixXd pp = Eigen::MatrixXd::Zero(m * blocks, head + blocks);
    for (Eigen::Index i = 0; i < blocks; ++i) {
        pp.block(i * m, 0, m, head) = phi;
        // block i carries the i-th largest level
        pp.block(i * m, head + i, m, 1).setConstant(levels[static_cast<size_t>(blocks - 1 - i)]);
    }
    return pp;
}

Eigen::VectorXd lc_measure(const Eigen::VectorXd& samples, const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("lc_measure: empty level set");
    for (size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i - 1] < levels[i]))
            throw std::invalid_argument("lc_measure: levels must be strictly increasing");
    const Eigen::Index m = samples.size();
    const Eigen::Index blocks = static_cast<Eigen::Index>(levels.size());
    Eigen::VectorXd y(m * blocks);
    for (Eigen::Index i = 0; i < blocks; ++i) {
        const double level = levels[static_cast<size_t>(blocks - 1 - i)];
        for (Eigen::Index r = 0; r < m; ++r)
            y[i * m + r] = (samples[r] - level < 0.0) ? -1.0 : 1.0;
    }
    return y;
}

LCEventStream encode_lc_events(const Eigen::VectorXd& samples, const std::vector<double>& levels,
                               double sample_period) {
    if (levels.empty()) throw std::invalid_argument("encode_lc_events: empty level set");
    if (!(sample_period > 0.0)) throw std::invalid_argument("encode_lc_events: sample_period must be positive");
    if (samples.size() == 0) throw std::invalid_argument("encode_lc_events: empty sample sequence");
    for (size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i - 1] < levels[i]))
            throw std::invalid_argument("encode_lc_events: levels must be strictly increasing");

    const int count = static_cast<int>(levels.size());
    const int half = (count - 1) / 2;
    LCEventStream stream;
    stream.levels = levels;
    stream.sample_period = sample_period;
    stream.sample_count = static_cast<int>(samples.size());

    std::vector<int> sign(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        sign[static_cast<size_t>(i)] = (samples[0] - levels[static_cast<size_t>(i)] < 0.0) ? -1 : 1;
    stream.initial_signs = sign;

    for (int m = 1; m < stream.sample_count; ++m) {
        for (int i = 0; i < count; ++i) {
            const int s = (samples[m] - levels[static_cast<size_t>(i)] < 0.0) ? -1 : 1;
            if (s != sign[static_cast<size_t>(i)]) {
                stream.events.push_back({m, i - half, s});
                sign[static_cast<size_t>(i)] = s;
            }
        }
    }
    return stream;
}

Eigen::VectorXd decode_lc_events(const LCEventStream& stream) {
    const int count = static_cast<int>(stream.levels.size());
    if (count == 0) throw corrupt_stream_error("decode_lc_events: empty level set");
    if (stream.sample_count < 1) throw corrupt_stream_error("decode_lc_events: bad sample count");
    if (static_cast<int>(stream.initial_signs.size()) != count)
        throw corrupt_stream_error("decode_lc_events: initial sign count mismatch");
    const int half = (count - 1) / 2;
    const int m_total = stream.sample_count;

    // validate event ranges and the (tick, level_index) sort invariant; equal
    // pairs are the duplicate case
    int prev_tick = 0;
    int prev_li = 0;
    bool first = true;
    std::vector<std::vector<LCEvent>> per_level(static_cast<size_t>(count));
    for (const LCEvent& ev : stream.events) {
        if (ev.tick < 1 || ev.tick >= m_total)
            throw corrupt_stream_error("decode_lc_events: event tick out of range");
        if (ev.level_index < -half || ev.level_index > count - 1 - half)
            throw corrupt_stream_error("decode_lc_events: event level index out of range");
        if (ev.direction != 1 && ev.direction != -1)
            throw corrupt_stream_error("decode_lc_events: event direction not +-1");
        if (!first) {
            if (ev.tick < prev_tick || (ev.tick == prev_tick && ev.level_index < prev_li))
                throw corrupt_stream_error("decode_lc_events: events out of order");
            if (ev.tick == prev_tick && ev.level_index == prev_li)
                throw corrupt_stream_error("decode_lc_events: duplicate (tick, level) event");
        }
        prev_tick = ev.tick;
        prev_li = ev.level_index;
        first = false;
        per_level[static_cast<size_t>(ev.level_index + half)].push_back(ev);
    }

    // replay each level's sign sequence; a direction equal to the running sign
    // is no flip at all and marks the stream corrupt
    std::vector<std::vector<int>> seq(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int s0 = stream.initial_signs[static_cast<size_t>(i)];
        if (s0 != 1 && s0 != -1) throw corrupt_stream_error("decode_lc_events: initial sign not +-1");
        auto& s = seq[static_cast<size_t>(i)];
        s.assign(static_cast<size_t>(m_total), s0);
        int cur = s0;
        int pos = 0;
        for (const LCEvent& ev : per_level[static_cast<size_t>(i)]) {
            if (ev.direction == cur)
                throw corrupt_stream_error("decode_lc_events: event does not flip the sign");
            for (int m = pos; m < ev.tick; ++m) s[static_cast<size_t>(m)] = cur;
            cur = ev.direction;
            pos = ev.tick;
        }
        for (int m = pos; m < m_total; ++m) s[static_cast<size_t>(m)] = cur;
    }

    Eigen::VectorXd y(static_cast<Eigen::Index>(m_total) * count);
    for (int i = 0; i < count; ++i) {
        const auto& s = seq[static_cast<size_t>(count - 1 - i)]; // largest level first
        for (int m = 0; m < m_total; ++m)
            y[static_cast<Eigen::Index>(i) * m_total + m] = static_cast<double>(s[static_cast<size_t>(m)]);
    }
    return y;
}

std::string lc_stream_to_text(const LCEventStream& stream) {
    std::string out;
    char buf[64];
    out += "levels=";
    for (size_t i = 0; i < stream.levels.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", stream.levels[i]);
        if (i) out += ',';
        out += buf;
    }
    out += '\n';
    std::snprintf(buf, sizeof(buf), "T=%.17g\n", stream.sample_period);
    out += buf;
    std::snprintf(buf, sizeof(buf), "M=%d\n", stream.sample_count);
    out += buf;
    out += "init=";
    for (size_t i = 0; i < stream.initial_signs.size(); ++i) {
        if (i) out += ',';
        out += (stream.initial_signs[i] > 0) ? "1" : "-1";
    }
    out += '\n';
    for (const LCEvent& ev : stream.events) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d\n", ev.tick, ev.level_index, ev.direction);
        out += buf;
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

} // namespace

LCEventStream lc_stream_from_text(const std::string& text) {
    LCEventStream stream;
    std::stringstream ss(text);
    std::string line;
    bool have_levels = false, have_t = false, have_m = false, have_init = false;
    try {
        while (std::getline(ss, line)) {
            if (line.empty()) continue;
            if (line.rfind("levels=", 0) == 0) {
                for (const auto& v : split(line.substr(7), ',')) stream.levels.push_back(std::stod(v));
                have_levels = true;
            } else if (line.rfind("T=", 0) == 0) {
                stream.sample_period = std::stod(line.substr(2));
                have_t = true;
            } else if (line.rfind("M=", 0) == 0) {
                stream.sample_count = std::stoi(line.substr(2));
                have_m = true;
            } else if (line.rfind("init=", 0) == 0) {
                for (const auto& v : split(line.substr(5), ',')) stream.initial_signs.push_back(std::stoi(v));
                have_init = true;
            } else {
                const auto cells = split(line, ',');
                if (cells.size() != 3) throw corrupt_stream_error("lc_stream_from_text: malformed event line");
                stream.events.push_back({std::stoi(cells[0]), std::stoi(cells[1]), std::stoi(cells[2])});
            }
        }
    } catch (const corrupt_stream_error&) {
        throw;
    } catch (const std::exception&) {
        throw corrupt_stream_error("lc_stream_from_text: unparsable numeric field");
    }
    if (!have_levels || !have_t || !have_m || !have_init)
        throw corrupt_stream_error("lc_stream_from_text: missing header line");
    return stream;
}

MeasurementEnsemble make_zc_ensemble(const SignalSpec& spec, const Eigen::VectorXd& samples) {
    MeasurementEnsemble e;
    e.phi = build_phi(spec);
    if (e.phi.rows() != samples.size())
        throw std::invalid_argument("make_zc_ensemble: sample count does not match the spec");
    e.signs = sign_measure(samples);
    e.kind = MeasurementKind::ZC;
    e.spec = spec;
    return e;
}

MeasurementEnsemble make_lc_ensemble(const SignalSpec& spec, const Eigen::VectorXd& samples,
                                     const std::vector<double>& levels) {
    MeasurementEnsemble e;
    const Eigen::MatrixXd phi = build_phi(spec);
    if (phi.rows() != samples.size())
        throw std::invalid_argument("make_lc_ensemble: sample count does not match the spec");
    e.phi = build_phi_prime(phi, levels);
    e.signs = lc_measure(samples, levels);
    e.kind = MeasurementKind::LC;
    e.levels = levels;
    e.spec = spec;
    return e;
}

} // namespace lcrec
