#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "bidisc/errors.hpp"
#include "bidisc/mc.hpp"
#include "bidisc/rif.hpp"
#include "bidisc/rng.hpp"

namespace bidisc {

// Shared per-coordinate weight exponent of (1-|z1|^2)^beta (1-|z2|^2)^beta dV.
struct WeightParams {
    double beta = 0.0;

    void require_integrable() const {
        if (!(beta > -1.0)) throw UnsupportedWeight();
    }
};

// S(zeta, delta): points of D^2 within chordal distance delta_i of zeta_i.
struct CarlesonBox {
    BoundaryPoint center;
    double delta1 = 1.0;
    double delta2 = 1.0;

    bool contains(Complex z1, Complex z2) const {
        return std::abs(z1 - center.z1()) < delta1 &&
               std::abs(z2 - center.z2()) < delta2 && std::abs(z1) < 1.0 &&
               std::abs(z2) < 1.0;
    }
};

// Per-coordinate proposal on the disc in (v, theta) coordinates with
// v = 1 - |z|^2.  The radial law is a mixture of the weight-shaped draw
// v = v_max t^{1/(beta+1)} and a log-uniform draw on [v_floor, v_max]; the
// importance weight is tracked exactly, so any mixture is unbiased for
// integrals of v^beta over the covered sector.
struct CoordProposal {
    double theta_center = 0.0;
    double theta_half = std::numbers::pi;
    double v_max = 1.0;
    double v_floor = 1e-9;
    double mix = 1.0;  // probability of the weight-shaped component

    static CoordProposal full_disc() { return {}; }

    // Covers {z in D : |z - e^{i theta}| < delta}.
    static CoordProposal for_cap(double theta, double delta) {
        CoordProposal p;
        p.theta_center = theta;
        if (delta >= 1.0) return p;
        p.v_max = delta * (2.0 - delta);
        const double x = delta / (2.0 * std::sqrt(1.0 - delta));
        p.theta_half = x >= 1.0 ? std::numbers::pi : 2.0 * std::asin(x);
        return p;
    }

    struct Draw {
        Complex z;
        double weight;
    };

    Draw sample(const SubstreamRng& rng, std::uint64_t counter,
                std::uint64_t slot0, double beta) const {
        const double theta =
            theta_center + (2.0 * rng.uniform(counter, slot0) - 1.0) * theta_half;
        const double pick = rng.uniform(counter, slot0 + 1);
        const double t = rng.uniform(counter, slot0 + 2);
        double v, weight;
        const double bp1 = beta + 1.0;
        if (mix >= 1.0) {
            v = v_max * std::pow(t, 1.0 / bp1);
            weight = theta_half * std::pow(v_max, bp1) / bp1;
        } else {
            const double logspan = std::log(v_max / v_floor);
            if (pick < mix) {
                v = v_max * std::pow(t, 1.0 / bp1);
            } else {
                v = v_floor * std::exp(t * logspan);
            }
            const double g1 =
                bp1 * std::pow(v, beta) / std::pow(v_max, bp1);
            const double g2 = v >= v_floor ? 1.0 / (v * logspan) : 0.0;
            weight = theta_half * std::pow(v, beta) /
                     (mix * g1 + (1.0 - mix) * g2);
        }
        const double r = std::sqrt(1.0 - v);
        return {std::polar(r, theta), weight};
    }

    double max_weight(double beta) const {
        const double bp1 = beta + 1.0;
        const double cap = theta_half * std::pow(v_max, bp1) / bp1;
        return mix > 0.0 ? cap / mix : cap * bp1 * std::log(v_max / v_floor);
    }
};

// Generic weighted-volume estimator: the indicator is tested on proposal
// draws and each hit contributes the product of coordinate weights.
template <typename Indicator>
VolumeEstimate mc_weighted_volume(const WeightParams& w,
                                  const CoordProposal& p1,
                                  const CoordProposal& p2,
                                  Indicator&& indicator, std::uint64_t samples,
                                  std::uint64_t seed, std::uint64_t stream,
                                  int workers) {
    w.require_integrable();
    const SubstreamRng rng(seed, stream);
    const double zero_floor = p1.max_weight(w.beta) * p2.max_weight(w.beta);
    return mc_reduce(samples, seed, workers, zero_floor,
                     [&](std::uint64_t i) -> double {
                         const auto d1 = p1.sample(rng, i, 0, w.beta);
                         const auto d2 = p2.sample(rng, i, 3, w.beta);
                         if (!indicator(d1.z, d2.z)) return 0.0;
                         return d1.weight * d2.weight;
                     });
}

// V_beta of an indicator set, sampled exactly from the weight-proportional
// density (full-disc proposal, estimate = (pi/(beta+1))^2 x hit mean).
template <typename Indicator>
VolumeEstimate weighted_volume_mc(Indicator&& indicator, const WeightParams& w,
                                  std::uint64_t samples, std::uint64_t seed,
                                  int workers = 0, std::uint64_t stream = 1) {
    return mc_weighted_volume(w, CoordProposal::full_disc(),
                              CoordProposal::full_disc(),
                              std::forward<Indicator>(indicator), samples,
                              seed, stream, workers);
}

// Exact value of V_beta({(1-|z1|^2)(1-|z2|^2) <= delta}):
//   pi^2 [ delta^{b+1}/(b+1)^2 + delta^{b+1} ln(1/delta)/(b+1) ],  b = beta.
inline double sublevel_volume_exact(const WeightParams& w, double delta) {
    w.require_integrable();
    if (!(delta > 0.0 && delta <= 1.0))
        throw Error("DomainError", "delta must lie in (0,1]");
    const double bp1 = w.beta + 1.0;
    const double d = std::pow(delta, bp1);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return pi2 * (d / (bp1 * bp1) + d * std::log(1.0 / delta) / bp1);
}

// MC estimate of V_a(S(zeta, delta)) from the box-localized truncated
// proposal; acceptance stays order one at every scale.
inline VolumeEstimate carleson_box_volume(const WeightParams& w,
                                          const CarlesonBox& box,
                                          std::uint64_t samples,
                                          std::uint64_t seed, int workers = 0,
                                          std::uint64_t stream = 2) {
    const auto p1 = CoordProposal::for_cap(box.center.theta1, box.delta1);
    const auto p2 = CoordProposal::for_cap(box.center.theta2, box.delta2);
    return mc_weighted_volume(
        w, p1, p2,
        [&box](Complex z1, Complex z2) { return box.contains(z1, z2); },
        samples, seed, stream, workers);
}

}  // namespace bidisc
