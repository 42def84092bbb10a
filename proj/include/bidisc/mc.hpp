#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "bidisc/rng.hpp"

namespace bidisc {

// One Monte Carlo integration result.  std_error is 0 only when every
// contribution was identical (exact or saturated runs); an all-miss run
// reports the rule-of-three style floor max_weight/n instead of 0.
struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

inline unsigned resolve_workers(int workers) {
    if (workers > 0) return static_cast<unsigned>(workers);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Deterministic block-parallel reduction: sample i contributes fn(i), a pure
// function of the index; blocks of fixed size are summed in index order and
// combined in block order, so the result is bit-identical for any worker
// count.
template <typename SampleFn>
VolumeEstimate mc_reduce(std::uint64_t n, std::uint64_t seed, int workers,
                         double zero_hit_weight, SampleFn&& fn) {
    constexpr std::uint64_t kBlock = 1 << 16;
    const std::uint64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> block_sum(nblocks, 0.0), block_sumsq(nblocks, 0.0);
    std::vector<double> block_min(nblocks, 0.0), block_max(nblocks, 0.0);

    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(n, lo + kBlock);
        double s = 0.0, s2 = 0.0;
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double x = fn(i);
            s += x;
            s2 += x * x;
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        block_sum[b] = s;
        block_sumsq[b] = s2;
        block_min[b] = mn;
        block_max[b] = mx;
    };

    const unsigned nw =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), nblocks));
    if (nw <= 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (unsigned w = 0; w < nw; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < nblocks; b += nw) run_block(b);
            });
        for (auto& t : pool) t.join();
    }

    double sum = 0.0, sumsq = 0.0;
    double mn = block_min[0], mx = block_max[0];
    for (std::uint64_t b = 0; b < nblocks; ++b) {
        sum += block_sum[b];
        sumsq += block_sumsq[b];
        mn = std::min(mn, block_min[b]);
        mx = std::max(mx, block_max[b]);
    }

    VolumeEstimate est;
    est.samples = n;
    est.seed = seed;
    est.value = mn == mx ? mn : sum / static_cast<double>(n);
    const double nn = static_cast<double>(n);
    // mn == mx means every contribution was identical; the accumulated
    // rounding in sum/sumsq must not masquerade as sampling variance.
    double var = mn == mx
                     ? 0.0
                     : (sumsq - nn * est.value * est.value) / (nn - 1.0);
    if (var < 0.0) var = 0.0;
    est.std_error = std::sqrt(var / nn);
    if (est.value == 0.0 && est.std_error == 0.0)
        est.std_error = zero_hit_weight / nn;
    return est;
}

}  // namespace bidisc
