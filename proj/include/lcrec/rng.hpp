#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace lcrec {

// Stable 64-bit hash of a value tuple (splitmix64-style finalizer per value).
// Used to derive per-trial seeds so sweeps are order-independent: the seed for
// (master, trial, K, L) never depends on which other cells run or in what order.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> values);

// Deterministic draws on top of mt19937_64. The uniform and normal mappings are
// spelled out here instead of using <random> distribution objects because those
// are implementation-defined and would tie results to one standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1) with 53-bit resolution
    double uniform();

    // standard normal via Box-Muller; the pair's second value is cached
    double normal();

    // k distinct values from {0, ..., n-1}, returned ascending
    std::vector<int> sample_without_replacement(int n, int k);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace lcrec
