#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bidisc/mc.hpp"
#include "bidisc/rng.hpp"

using namespace bidisc;

TEST_CASE("draws are pure functions of (seed, stream, counter, slot)") {
    const SubstreamRng a(123, 7), b(123, 7);
    for (std::uint64_t i = 0; i < 100; ++i)
        CHECK(a.word(i, 3) == b.word(i, 3));
    const SubstreamRng c(123, 8);
    int diff = 0;
    for (std::uint64_t i = 0; i < 100; ++i) diff += (a.word(i, 0) != c.word(i, 0));
    CHECK(diff > 90);
}

TEST_CASE("uniforms stay inside the open unit interval") {
    const SubstreamRng rng(0, 0);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double u = rng.uniform(i, i % 5);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform mean and variance look uniform") {
    const SubstreamRng rng(2024, 1);
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform(i, 0);
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("mc_reduce is bit-identical across worker counts") {
    auto fn = [](std::uint64_t i) {
        const SubstreamRng rng(99, 5);
        return rng.uniform(i, 0) * rng.uniform(i, 1);
    };
    const auto e1 = mc_reduce(300000, 99, 1, 1.0, fn);
    const auto e4 = mc_reduce(300000, 99, 4, 1.0, fn);
    const auto e8 = mc_reduce(300000, 99, 8, 1.0, fn);
    CHECK(e1.value == e4.value);
    CHECK(e1.value == e8.value);
    CHECK(e1.std_error == e4.std_error);
    CHECK(e1.std_error == e8.std_error);
}

TEST_CASE("mc_reduce reports a positive error floor on all-miss runs") {
    const auto est =
        mc_reduce(1000, 1, 2, 5.0, [](std::uint64_t) { return 0.0; });
    CHECK(est.value == 0.0);
    CHECK(est.std_error == doctest::Approx(5.0 / 1000.0));
}
