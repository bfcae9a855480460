#include "lcrec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lcrec {

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> values) {
    std::uint64_t z = 0;
    for (std::uint64_t v : values) {
        z += v * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
    }
    return z;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u > 0 so that log(u) is finite
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: k out of range");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        // j uniform in [i, n); floor of uniform()*(n-i) is safe since uniform() < 1
        const int j = i + static_cast<int>(uniform() * static_cast<double>(n - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace lcrec
