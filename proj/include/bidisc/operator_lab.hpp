#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bidisc/errors.hpp"
#include "bidisc/fit.hpp"
#include "bidisc/measure.hpp"
#include "bidisc/rif.hpp"

namespace bidisc {

// Empirical Lojasiewicz data for one coordinate symbol near a torus
// singularity: lower-envelope pairs (proximity, |phi - 1|) after the value
// rotation, and the fitted exponent/constant.
struct LojasiewiczEstimate {
    double exponent_hat = 0.0;
    double constant_hat = 0.0;
    Neighborhood neighborhood;
    std::vector<std::pair<double, double>> envelope_points;
    Complex target_value;  // non-tangential value before rotation
};

struct RatioRow {
    CarlesonBox box;
    VolumeEstimate pullback;
    VolumeEstimate box_volume;
    double ratio = 0.0;
};

struct BoundednessReport {
    std::string symbol_name;
    double beta = 0.0;
    double a = 0.0;
    double q_used = 0.0;
    std::vector<RatioRow> rows;
    double sup_ratio = 0.0;
    bool growth_flag = false;
    std::optional<ExponentFit> pullback_fit;
};

// V_beta({z : Phi(z) in box}), optionally restricted to a neighborhood.
// Draws come from a boundary-emphasising mixture proposal (half
// weight-shaped, half log-uniform in 1-|z|^2) so that thin pull-back sets
// near the torus are still hit at fine scales; the importance weights keep
// the estimate unbiased.  Denominator blow-ups count as non-members.
inline VolumeEstimate pullback_volume(
    const SymbolPair& sym, const CarlesonBox& box, const WeightParams& w,
    std::uint64_t samples, std::uint64_t seed,
    const std::optional<Neighborhood>& restrict_to = std::nullopt,
    int workers = 0, std::uint64_t stream = 3) {
    CoordProposal p1 = CoordProposal::full_disc();
    CoordProposal p2 = CoordProposal::full_disc();
    if (restrict_to) {
        p1 = CoordProposal::for_cap(restrict_to->center.theta1,
                                    restrict_to->radius);
        p2 = CoordProposal::for_cap(restrict_to->center.theta2,
                                    restrict_to->radius);
    }
    p1.mix = p2.mix = 0.5;
    auto indicator = [&](Complex z1, Complex z2) {
        if (restrict_to && !restrict_to->contains(z1, z2)) return false;
        const auto f = sym.first.try_eval(z1, z2);
        if (!f) return false;
        const auto g = sym.second.try_eval(z1, z2);
        if (!g) return false;
        return std::abs(*f - box.center.z1()) < box.delta1 &&
               std::abs(*g - box.center.z2()) < box.delta2;
    };
    return mc_weighted_volume(w, p1, p2, indicator, samples, seed, stream,
                              workers);
}

namespace detail {

// Lower envelope of a gap function over log-binned proximity
// m(z) = min(1-|z1|^2, 1-|z2|^2), with a log-log slope fit.  Log-uniform
// radial draws populate every proximity decade evenly; the envelope only
// needs coverage, not an unbiased measure.
template <typename GapFn>
std::pair<std::vector<std::pair<double, double>>, ExponentFit> envelope_fit(
    GapFn&& gap_at, const Neighborhood& nbhd, std::uint64_t samples, int bins,
    std::uint64_t seed, std::uint64_t stream) {
    if (bins < 6) throw EnvelopeTooSparse("need at least 6 bins");
    const double r = nbhd.radius;
    const double v_max = std::min(1.0, r * (2.0 - r));
    const double m_floor = 1e-6;
    const double logspan = std::log(v_max / m_floor);
    const auto cap1 = CoordProposal::for_cap(nbhd.center.theta1, r);
    const auto cap2 = CoordProposal::for_cap(nbhd.center.theta2, r);

    std::vector<double> bin_min(bins, std::numeric_limits<double>::infinity());
    const SubstreamRng rng(seed, stream);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double v1 = m_floor * std::exp(rng.uniform(i, 0) * logspan);
        const double v2 = m_floor * std::exp(rng.uniform(i, 1) * logspan);
        // Half the angular draws stay within ~v of the center; a uniform
        // angle alone cannot resolve the envelope at proximities below
        // theta_half / (samples per bin).
        const double h1 = rng.uniform(i, 4) < 0.5
                              ? std::min(cap1.theta_half, v1)
                              : cap1.theta_half;
        const double h2 = rng.uniform(i, 5) < 0.5
                              ? std::min(cap2.theta_half, v2)
                              : cap2.theta_half;
        const double t1 =
            cap1.theta_center + (2.0 * rng.uniform(i, 2) - 1.0) * h1;
        const double t2 =
            cap2.theta_center + (2.0 * rng.uniform(i, 3) - 1.0) * h2;
        const Complex z1 = std::polar(std::sqrt(1.0 - v1), t1);
        const Complex z2 = std::polar(std::sqrt(1.0 - v2), t2);
        if (!nbhd.contains(z1, z2)) continue;
        const std::optional<double> gap = gap_at(z1, z2);
        if (!gap || !(*gap > 0.0)) continue;
        const double m = std::min(v1, v2);
        int b = static_cast<int>(std::log(m / m_floor) / logspan * bins);
        b = std::clamp(b, 0, bins - 1);
        bin_min[b] = std::min(bin_min[b], *gap);
    }

    std::vector<std::pair<double, double>> envelope;
    for (int b = 0; b < bins; ++b) {
        if (!std::isfinite(bin_min[b])) continue;
        const double m_center =
            m_floor * std::exp((b + 0.5) / bins * logspan);
        envelope.emplace_back(m_center, bin_min[b]);
    }
    if (envelope.size() < 6) throw EnvelopeTooSparse();
    ExponentFit fit = fit_scaling_exponent(envelope, false);
    return {std::move(envelope), std::move(fit)};
}

}  // namespace detail

// Lower-envelope fit of ln |phi(z) - 1| against ln min(1-|z1|^2, 1-|z2|^2)
// in a neighborhood of eta, after rotating the non-tangential value to 1.
// The slope is an empirical upper estimate of the optimal Lojasiewicz
// exponent on this neighborhood.
inline LojasiewiczEstimate lojasiewicz_fit(const Rif& phi,
                                           const BoundaryPoint& eta,
                                           const Neighborhood& nbhd,
                                           std::uint64_t samples, int bins,
                                           std::uint64_t seed,
                                           std::uint64_t stream = 4) {
    NtLimitReport nt;
    try {
        nt = nt_limit(phi, eta);
    } catch (const Error& e) {
        throw SingularityMismatch("nt_limit failed at eta: " + std::string(e.what()));
    }
    if (std::abs(nt.modulus - 1.0) > 1e-6)
        throw SingularityMismatch("non-unimodular radial limit");
    const Complex target = nt.value / nt.modulus;
    const Rif rot = detail::value_rotate(phi, std::conj(target));

    auto gap_at = [&rot](Complex z1, Complex z2) -> std::optional<double> {
        const auto val = rot.try_eval(z1, z2);
        if (!val) return std::nullopt;
        return std::abs(*val - Complex{1.0, 0.0});
    };
    auto [envelope, fit] =
        detail::envelope_fit(gap_at, nbhd, samples, bins, seed, stream);

    LojasiewiczEstimate est;
    est.exponent_hat = fit.exponent;
    est.constant_hat = std::exp(fit.log_constant);
    est.neighborhood = nbhd;
    est.envelope_points = std::move(envelope);
    est.target_value = nt.value;
    return est;
}

namespace detail {

struct RotatedCoord {
    Rif rotated;
    BoundaryPoint singularity;
    Complex nt_value;
};

// Brings the designated singularity to (1,1) and the non-tangential value
// to 1.
inline RotatedCoord normalize_coordinate(const Rif& phi,
                                         std::size_t sing_index) {
    const auto sings = find_singularities(phi);
    if (sings.empty())
        throw SingularityMismatch("coordinate symbol has no torus singularity");
    if (sing_index >= sings.size())
        throw SingularityMismatch("designated singularity index out of range");
    const BoundaryPoint eta = sings[sing_index];
    const NtLimitReport nt = nt_limit(phi, eta);
    if (std::abs(nt.modulus - 1.0) > 1e-6)
        throw SingularityMismatch("non-unimodular radial limit");
    const Complex lambda = std::conj(nt.value / nt.modulus);
    return {rotate_symbol(phi, eta, BoundaryPoint(0.0, 0.0), lambda), eta,
            nt.value};
}

// Shrink the fit neighborhood by halving until the exponent stabilizes.
inline double stabilized_exponent(const Rif& rot, std::uint64_t samples,
                                  int bins, std::uint64_t seed) {
    const BoundaryPoint origin(0.0, 0.0);
    double radius = 0.3;
    double q = lojasiewicz_fit(rot, origin, {origin, radius}, samples, bins,
                               seed)
                   .exponent_hat;
    for (int k = 0; k < 3; ++k) {
        radius *= 0.5;
        double q_next;
        try {
            q_next = lojasiewicz_fit(rot, origin, {origin, radius}, samples,
                                     bins, seed)
                         .exponent_hat;
        } catch (const EnvelopeTooSparse&) {
            break;
        }
        const bool stable = std::fabs(q_next - q) < 0.1;
        q = q_next;
        if (stable) break;
    }
    return q;
}

}  // namespace detail

// Empirical certificate for the pull-back bound at exponents
// a = beta/(2q) - 2: boxes at (1,1) over the given scales, pull-back
// volumes restricted to the common neighborhood, and the resulting ratio
// table.  Requires beta > 2q.
inline BoundednessReport theorem_certificate(
    const SymbolPair& sym, double beta, std::optional<double> q_override,
    std::vector<double> scales, std::uint64_t samples, std::uint64_t seed,
    int workers = 0, std::pair<std::size_t, std::size_t> sing_indices = {0, 0},
    std::uint64_t fit_samples = 200000, int fit_bins = 32) {
    const auto c1 = detail::normalize_coordinate(sym.first, sing_indices.first);
    const auto c2 =
        detail::normalize_coordinate(sym.second, sing_indices.second);
    const SymbolPair rotated{c1.rotated, c2.rotated};

    double q;
    if (q_override) {
        q = *q_override;
    } else {
        const double q1 = detail::stabilized_exponent(c1.rotated, fit_samples,
                                                      fit_bins, seed);
        const double q2 = detail::stabilized_exponent(c2.rotated, fit_samples,
                                                      fit_bins, seed + 1);
        q = std::max(q1, q2);
    }
    if (!(q > 0.0)) throw SingularityMismatch("non-positive exponent");
    if (!(beta > 2.0 * q)) throw BetaTooSmall();

    BoundednessReport rep;
    rep.beta = beta;
    rep.q_used = q;
    rep.a = beta / (2.0 * q) - 2.0;
    const BoundaryPoint origin(0.0, 0.0);
    const Neighborhood hood{origin, 0.3};
    std::sort(scales.begin(), scales.end(), std::greater<>());

    const std::uint64_t bv_samples =
        std::max<std::uint64_t>(100000, samples / 10);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const CarlesonBox box{origin, scales[i], scales[i]};
        RatioRow row;
        row.box = box;
        row.pullback = pullback_volume(rotated, box, {beta}, samples, seed,
                                       hood, workers, 0x100 + i);
        row.box_volume = carleson_box_volume({rep.a}, box, bv_samples, seed,
                                             workers, 0x200 + i);
        row.ratio = row.box_volume.value > 0.0
                        ? row.pullback.value / row.box_volume.value
                        : 0.0;
        rep.rows.push_back(std::move(row));
    }

    rep.sup_ratio = 0.0;
    for (const auto& row : rep.rows)
        rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    rep.growth_flag = rep.rows.size() >= 2 &&
                      rep.rows.back().ratio > 2.0 * rep.rows.front().ratio;

    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rep.rows)
        if (row.pullback.value > 0.0)
            pts.emplace_back(row.box.delta1, row.pullback.value);
    if (pts.size() >= 4) rep.pullback_fit = fit_scaling_exponent(pts, false);
    return rep;
}

// Unrestricted Lemma-1-style sweep over centers x scales; sup_ratio stands
// in for the Carleson constant and growth_flag diagnoses likely
// unboundedness.  Evidence, not proof, in both directions.
inline BoundednessReport carleson_sweep(const SymbolPair& sym, double beta,
                                        double a,
                                        std::vector<BoundaryPoint> centers,
                                        std::vector<double> scales,
                                        std::uint64_t samples,
                                        std::uint64_t seed, int workers = 0,
                                        double aspect = 1.0) {
    if (centers.empty())
        throw Error("ValidationError", "centers must be non-empty");
    BoundednessReport rep;
    rep.beta = beta;
    rep.a = a;
    rep.q_used = beta / (2.0 * (a + 2.0));
    std::sort(scales.begin(), scales.end(), std::greater<>());

    std::vector<double> coarse_ratios, fine_ratios;
    std::uint64_t cell = 0;
    for (const auto& zeta : centers) {
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const CarlesonBox box{zeta, scales[i],
                                  std::min(2.0, scales[i] * aspect)};
            RatioRow row;
            row.box = box;
            row.pullback =
                pullback_volume(sym, box, {beta}, samples, seed, std::nullopt,
                                workers, 0x300 + cell);
            row.box_volume = carleson_box_volume({a}, box, samples, seed,
                                                 workers, 0x400 + cell);
            row.ratio = row.box_volume.value > 0.0
                            ? row.pullback.value / row.box_volume.value
                            : 0.0;
            if (i == 0) coarse_ratios.push_back(row.ratio);
            if (i + 1 == scales.size()) fine_ratios.push_back(row.ratio);
            rep.rows.push_back(std::move(row));
            ++cell;
        }
    }
    rep.sup_ratio = 0.0;
    for (const auto& row : rep.rows)
        rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    const double coarse =
        *std::max_element(coarse_ratios.begin(), coarse_ratios.end());
    const double fine =
        *std::max_element(fine_ratios.begin(), fine_ratios.end());
    rep.growth_flag = fine > 2.0 * coarse;
    return rep;
}

// Default sweep centers: designated singularities of both coordinates plus
// eight seeded torus points.
inline std::vector<BoundaryPoint> default_sweep_centers(const SymbolPair& sym,
                                                        std::uint64_t seed) {
    std::vector<BoundaryPoint> centers;
    for (const Rif* phi : {&sym.first, &sym.second})
        for (const auto& s : find_singularities(*phi)) {
            bool dup = false;
            for (const auto& c : centers)
                if (angle_dist(c.theta1, s.theta1) < 1e-9 &&
                    angle_dist(c.theta2, s.theta2) < 1e-9)
                    dup = true;
            if (!dup) centers.push_back(s);
        }
    const SubstreamRng rng(seed, 0xC0FFEE);
    for (int k = 0; k < 8; ++k)
        centers.emplace_back(kTwoPi * rng.uniform(k, 0),
                             kTwoPi * rng.uniform(k, 1));
    return centers;
}

}  // namespace bidisc
