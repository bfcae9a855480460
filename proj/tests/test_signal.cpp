#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lcrec/signal.hpp"

#include <cmath>

using namespace lcrec;

namespace {

SignalSpec small_spec() {
    SignalSpec spec;
    spec.n_max = 30;
    spec.omega0 = 10.0;
    spec.duration = 0.2;
    spec.sample_period = 1e-3;
    spec.band_lo = 1;
    spec.band_hi = 30;
    return spec;
}

} // namespace

TEST_CASE("sample_count covers the duration exactly") {
    SignalSpec spec; // defaults: d=2, T=5e-4
    CHECK(spec.sample_count() == 4001);
    CHECK(small_spec().sample_count() == 201);

    SignalSpec bad = small_spec();
    bad.sample_period = 3e-4; // 0.2 / 3e-4 is not an integer tick count
    CHECK_THROWS_AS(bad.sample_count(), std::invalid_argument);
}

TEST_CASE("spec validation rejects malformed fields") {
    const SignalSpec good = small_spec();
    CHECK_NOTHROW(good.validate());

    SignalSpec s = good;
    s.omega0 = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = good;
    s.duration = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = good;
    s.sample_period = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = good;
    s.band_lo = 31; // above band_hi
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = good;
    s.band_hi = 31; // above n_max
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = good;
    s.band_lo = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("random coefficients: sparsity, band, unit norm, determinism") {
    const SignalSpec spec = small_spec();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const CoeffVector a = random_sparse_coeffs(spec, 7, false, seed);
        REQUIRE(a.size() == spec.n_max + 1);
        int nonzeros = 0;
        for (int n = 0; n <= spec.n_max; ++n) {
            if (a[n] != 0.0) {
                ++nonzeros;
                CHECK(n >= spec.band_lo);
                CHECK(n <= spec.band_hi);
            }
        }
        CHECK(nonzeros == 7);
        CHECK(std::abs(a.norm() - 1.0) <= 1e-12);
    }

    const CoeffVector a1 = random_sparse_coeffs(spec, 5, false, 42);
    const CoeffVector a2 = random_sparse_coeffs(spec, 5, false, 42);
    const CoeffVector a3 = random_sparse_coeffs(spec, 5, false, 43);
    CHECK(a1 == a2);
    CHECK(a1 != a3);
}

TEST_CASE("dc index stays out unless requested") {
    SignalSpec spec = small_spec();
    spec.band_lo = 0;
    bool dc_seen = false;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const CoeffVector a = random_sparse_coeffs(spec, 10, false, seed);
        CHECK(a[0] == 0.0);
        if (random_sparse_coeffs(spec, 10, true, seed)[0] != 0.0) dc_seen = true;
    }
    CHECK(dc_seen);

    // K larger than the selectable band is impossible
    CHECK_THROWS_AS(random_sparse_coeffs(spec, 31, false, 1), std::invalid_argument);
}

TEST_CASE("evaluate matches a hand-built cosine sum") {
    const SignalSpec spec = small_spec();
    CoeffVector a = CoeffVector::Zero(spec.n_max + 1);
    a[2] = 0.8;
    a[7] = -0.3;
    const double t = 0.013;
    const double expected = 0.8 * std::cos(2 * spec.omega0 * t) - 0.3 * std::cos(7 * spec.omega0 * t);
    CHECK(evaluate(a, spec.omega0, t) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(evaluate(a, spec.omega0, 0.0) == doctest::Approx(0.5).epsilon(1e-14)); // sum of coeffs
}

TEST_CASE("uniform_sample equals evaluate on every tick") {
    const SignalSpec spec = small_spec();
    const CoeffVector a = random_sparse_coeffs(spec, 6, false, 9);
    const Eigen::VectorXd x = uniform_sample(a, spec);
    REQUIRE(x.size() == spec.sample_count());
    for (int m = 0; m < spec.sample_count(); ++m)
        CHECK(x[m] == evaluate(a, spec.omega0, static_cast<double>(m) * spec.sample_period));
}

TEST_CASE("snr: scale invariance and absolute arithmetic") {
    const SignalSpec spec = small_spec();
    const CoeffVector ref = random_sparse_coeffs(spec, 5, false, 3);
    CoeffVector est = ref;
    est[spec.band_lo] += 0.05;

    const double base = reconstruction_snr(ref, est, true);
    // power-of-two scalings commute with normalization exactly
    CHECK(reconstruction_snr(ref, 2.0 * est, true) == base);
    CHECK(reconstruction_snr(ref, 0.5 * est, true) == base);
    CHECK(reconstruction_snr(ref, 1024.0 * est, true) == base);
    CHECK(reconstruction_snr(ref, 3.0 * est, true) == doctest::Approx(base).epsilon(1e-12));

    // absolute mode: est = 2*ref has error norm equal to the reference norm
    CHECK(reconstruction_snr(ref, 2.0 * ref, false) == doctest::Approx(0.0).epsilon(1e-12));

    CoeffVector r2 = CoeffVector::Zero(2), e2 = CoeffVector::Zero(2);
    r2[0] = 1.0;
    e2[0] = 0.9;
    CHECK(reconstruction_snr(r2, e2, false) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("snr: caps and degenerate estimates") {
    const SignalSpec spec = small_spec();
    const CoeffVector ref = random_sparse_coeffs(spec, 5, false, 3);
    CHECK(reconstruction_snr(ref, ref, true) == 300.0);
    CHECK(reconstruction_snr(ref, ref, false) == 300.0);

    const CoeffVector zero = CoeffVector::Zero(ref.size());
    CHECK(reconstruction_snr(ref, zero, true) == -300.0);
    CHECK(reconstruction_snr(ref, zero, false) == -300.0);

    CoeffVector nan_est = ref;
    nan_est[1] = std::nan("");
    CHECK(reconstruction_snr(ref, nan_est, true) == -300.0);
    CHECK(reconstruction_snr(ref, nan_est, false) == -300.0);
}

TEST_CASE("dynamic_range returns the sample extremes") {
    Eigen::VectorXd x(4);
    x << 0.5, -1.25, 2.0, 0.0;
    const auto [lo, hi] = dynamic_range(x);
    CHECK(lo == -1.25);
    CHECK(hi == 2.0);
}

TEST_CASE("csv and sparse json round trips preserve bits") {
    const SignalSpec spec = small_spec();
    const CoeffVector a = random_sparse_coeffs(spec, 8, false, 17);

    const CoeffVector via_csv = coeffs_from_csv(coeffs_to_csv(a));
    REQUIRE(via_csv.size() == a.size());
    CHECK(via_csv == a);

    const CoeffVector via_json = coeffs_from_sparse_json(coeffs_to_sparse_json(a), spec.n_max);
    REQUIRE(via_json.size() == a.size());
    CHECK(via_json == a);
}

TEST_CASE("malformed serialized coefficients are rejected") {
    CHECK_THROWS_AS(coeffs_from_csv("1.0,abc,3.0"), std::invalid_argument);
    CHECK_THROWS_AS(coeffs_from_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(coeffs_from_sparse_json("not json", 10), std::invalid_argument);
    CHECK_THROWS_AS(coeffs_from_sparse_json("[{\"n\": 99, \"a\": 1.0}]", 10), std::invalid_argument);
}
