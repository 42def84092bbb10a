#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "bidisc/bipoly.hpp"
#include "bidisc/errors.hpp"

namespace bidisc {

using Complex = std::complex<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Point of the torus T^2, stored as angles normalized to [0, 2pi).
struct BoundaryPoint {
    double theta1 = 0.0;
    double theta2 = 0.0;

    BoundaryPoint() = default;
    BoundaryPoint(double t1, double t2)
        : theta1(normalize(t1)), theta2(normalize(t2)) {}

    Complex z1() const { return std::polar(1.0, theta1); }
    Complex z2() const { return std::polar(1.0, theta2); }

    static double normalize(double t) {
        t = std::fmod(t, kTwoPi);
        if (t < 0) t += kTwoPi;
        return t;
    }
};

inline double angle_dist(double a, double b) {
    double d = std::fabs(BoundaryPoint::normalize(a - b));
    return std::min(d, kTwoPi - d);
}

// Bi-disc neighborhood of a torus point, intersected with D^2 on use.
struct Neighborhood {
    BoundaryPoint center;
    double radius = 0.3;  // in (0,1)

    bool contains(Complex z1, Complex z2) const {
        return std::abs(z1 - center.z1()) < radius &&
               std::abs(z2 - center.z2()) < radius && std::abs(z1) < 1.0 &&
               std::abs(z2) < 1.0;
    }
};

struct StabilityReport {
    double min_abs = 0.0;
    Complex argmin_z1, argmin_z2;
};

// Minimum of |p| over the bidisc shrunk by `margin`: a 4-D tensor grid scan
// followed by Gauss-Newton descent toward the zero set from the grid argmin,
// with iterates projected radially back into the scan polydisc.  A positive
// minimum is stability evidence; a near-zero one is an interior zero.
inline StabilityReport stability_scan(const BiPoly& p, int grid_per_dim,
                                      double margin) {
    StabilityReport rep;
    rep.min_abs = std::numeric_limits<double>::infinity();
    const int g = std::max(grid_per_dim, 2);
    const double rmax = 1.0 - margin;
    for (int a = 0; a < g; ++a) {
        const double r1 = rmax * a / (g - 1);
        for (int b = 0; b < g; ++b) {
            const Complex z1 = std::polar(r1, kTwoPi * b / g);
            for (int c = 0; c < g; ++c) {
                const double r2 = rmax * c / (g - 1);
                for (int d = 0; d < g; ++d) {
                    const Complex z2 = std::polar(r2, kTwoPi * d / g);
                    const double v = std::abs(p.eval(z1, z2));
                    if (v < rep.min_abs) {
                        rep.min_abs = v;
                        rep.argmin_z1 = z1;
                        rep.argmin_z2 = z2;
                    }
                }
            }
        }
    }

    const BiPoly p1 = p.partial1(), p2 = p.partial2();
    auto clamp = [rmax](Complex z) {
        const double r = std::abs(z);
        return r > rmax ? z * (rmax / r) : z;
    };
    Complex z1 = rep.argmin_z1, z2 = rep.argmin_z2;
    for (int iter = 0; iter < 200; ++iter) {
        const Complex f = p.eval(z1, z2);
        const Complex g1 = p1.eval(z1, z2), g2 = p2.eval(z1, z2);
        const double gn = std::norm(g1) + std::norm(g2);
        if (gn == 0.0) break;
        // One-equation Gauss-Newton step toward the zero curve of p.
        const Complex w1 = clamp(z1 - f * std::conj(g1) / gn);
        const Complex w2 = clamp(z2 - f * std::conj(g2) / gn);
        const double v = std::abs(p.eval(w1, w2));
        if (v < rep.min_abs) {
            rep.min_abs = v;
            rep.argmin_z1 = w1;
            rep.argmin_z2 = w2;
        }
        if (std::abs(w1 - z1) + std::abs(w2 - z2) < 1e-15) break;
        z1 = w1;
        z2 = w2;
    }
    return rep;
}

inline StabilityReport stability_check(const BiPoly& p, int grid_per_dim = 16,
                                       double margin = 0.1) {
    StabilityReport rep = stability_scan(p, grid_per_dim, margin);
    if (rep.min_abs < 1e-8) throw InstabilityDetected();
    return rep;
}

// Grid minimum of |P| over the margin-shrunk bidisc (Lemma-2-style
// evidence that the zero set avoids the interior).
inline double zero_set_interior_check(const BiPoly& P, double margin,
                                      int grid_per_dim) {
    return stability_scan(P, grid_per_dim, margin).min_abs;
}

// Rational inner function in Rudin form z1^N z2^M reflect(p)/p.
// The numerator is always the exact reflection of the denominator; the
// denominator carries grid-scan stability evidence from construction.
class RationalInnerFunction {
  public:
    RationalInnerFunction() : RationalInnerFunction(BiPoly::constant(1.0), 0, 0) {}

    RationalInnerFunction(BiPoly denominator, int monomial_n,
                          int monomial_m, bool check_stability = true)
        : n_(monomial_n),
          m_(monomial_m),
          denominator_(std::move(denominator)),
          numerator_(reflect(denominator_)) {
        if (denominator_.is_zero()) throw InstabilityDetected("zero denominator");
        const bool constant =
            denominator_.degree1() == 0 && denominator_.degree2() == 0;
        if (check_stability && !constant) stability_check(denominator_, 16, 0.05);
    }

    int monomial_power1() const { return n_; }
    int monomial_power2() const { return m_; }
    const BiPoly& numerator() const { return numerator_; }
    const BiPoly& denominator() const { return denominator_; }

    std::optional<Complex> try_eval(Complex z1, Complex z2,
                                    double guard = 1e-13) const {
        const Complex den = denominator_.eval(z1, z2);
        if (std::abs(den) < guard) return std::nullopt;
        Complex mono{1.0, 0.0};
        for (int k = 0; k < n_; ++k) mono *= z1;
        for (int k = 0; k < m_; ++k) mono *= z2;
        return mono * numerator_.eval(z1, z2) / den;
    }

    Complex eval(Complex z1, Complex z2, double guard = 1e-13) const {
        auto v = try_eval(z1, z2, guard);
        if (!v) throw DenominatorTooSmall();
        return *v;
    }

  private:
    int n_, m_;
    BiPoly denominator_;
    BiPoly numerator_;
};

using Rif = RationalInnerFunction;

struct SymbolPair {
    Rif first;   // phi
    Rif second;  // psi
};

inline std::vector<double> default_nt_radii() {
    std::vector<double> r;
    for (int k = 1; k <= 12; ++k) r.push_back(1.0 - std::ldexp(1.0, -k));
    return r;
}

struct NtLimitReport {
    Complex value;
    double modulus = 0.0;
    double rate = 0.0;  // estimated order of radial convergence
    std::vector<Complex> path_values;
};

// Radial limit at a torus point: evaluate along z(r) = (r z1, r z2) and
// extrapolate to r = 1 with a Neville table on the last four points in
// h = 1 - r.
inline NtLimitReport nt_limit(const Rif& phi, const BoundaryPoint& zeta,
                              std::vector<double> radii = default_nt_radii(),
                              double tol = 1e-7) {
    if (radii.size() < 8)
        throw NoConvergence("nt_limit needs at least 8 radii");
    NtLimitReport rep;
    for (double r : radii)
        rep.path_values.push_back(phi.eval(r * zeta.z1(), r * zeta.z2()));

    auto extrapolate = [&](std::size_t last) {
        // Polynomial extrapolation in h = 1 - r to h = 0.
        constexpr std::size_t kPts = 4;
        std::array<double, kPts> h;
        std::array<Complex, kPts> t;
        for (std::size_t i = 0; i < kPts; ++i) {
            const std::size_t idx = last - kPts + 1 + i;
            h[i] = 1.0 - radii[idx];
            t[i] = rep.path_values[idx];
        }
        for (std::size_t lvl = 1; lvl < kPts; ++lvl)
            for (std::size_t i = kPts - 1; i >= lvl; --i)
                t[i] = t[i] + (t[i] - t[i - 1]) * (h[i] / (h[i - lvl] - h[i]));
        return t[kPts - 1];
    };

    const Complex limit = extrapolate(radii.size() - 1);
    const Complex prev = extrapolate(radii.size() - 2);
    if (std::abs(limit - prev) > tol) throw NoConvergence();
    rep.value = limit;
    rep.modulus = std::abs(limit);

    // Convergence rate from the decay of |f(r_k) - L| on the tail.
    const std::size_t k = radii.size();
    const double d1 = std::abs(rep.path_values[k - 2] - limit);
    const double d0 = std::abs(rep.path_values[k - 3] - limit);
    const double h1 = 1.0 - radii[k - 2], h0 = 1.0 - radii[k - 3];
    rep.rate = (d1 > 0 && d0 > 0 && h1 != h0)
                   ? std::log(d0 / d1) / std::log(h0 / h1)
                   : 0.0;
    return rep;
}

// Torus points where the denominator vanishes: coarse grid scan for local
// minima of |p| followed by damped Newton on (theta1, theta2).
inline std::vector<BoundaryPoint> find_singularities(
    const Rif& phi, int grid_per_dim = 256, double refine_tol = 1e-10) {
    const BiPoly& p = phi.denominator();
    const BiPoly p1 = p.partial1(), p2 = p.partial2();
    const int g = std::max(grid_per_dim, 8);

    Eigen::MatrixXd vals(g, g);
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            vals(a, b) = std::abs(
                p.eval(std::polar(1.0, kTwoPi * a / g),
                       std::polar(1.0, kTwoPi * b / g)));

    // Torus zeros of a stable p are tangential, so |p| ~ eps^2 in the angle
    // offset eps; the Newton loop must run to the floating-point floor of
    // |p| (not stop at refine_tol) to localize the angles themselves.
    auto refine = [&](double t1, double t2) -> std::optional<BoundaryPoint> {
        for (int iter = 0; iter < 120; ++iter) {
            const Complex z1 = std::polar(1.0, t1), z2 = std::polar(1.0, t2);
            const Complex f = p.eval(z1, z2);
            if (std::abs(f) == 0.0) return BoundaryPoint(t1, t2);
            const Complex d1 = p1.eval(z1, z2) * Complex(0, 1) * z1;
            const Complex d2 = p2.eval(z1, z2) * Complex(0, 1) * z2;
            Eigen::Matrix2d J;
            J << d1.real(), d2.real(), d1.imag(), d2.imag();
            Eigen::Vector2d F(f.real(), f.imag());
            Eigen::Vector2d step =
                J.colPivHouseholderQr().solve(-F);
            if (!step.allFinite()) return std::nullopt;
            if (step.norm() > 0.1) step *= 0.1 / step.norm();
            double damp = 1.0;
            bool moved = false;
            for (int h = 0; h < 10; ++h) {
                const double u1 = t1 + damp * step(0),
                             u2 = t2 + damp * step(1);
                if (std::abs(p.eval(std::polar(1.0, u1),
                                    std::polar(1.0, u2))) < std::abs(f)) {
                    t1 = u1;
                    t2 = u2;
                    moved = true;
                    break;
                }
                damp *= 0.5;
            }
            if (!moved) break;
        }
        const double v = std::abs(
            p.eval(std::polar(1.0, t1), std::polar(1.0, t2)));
        if (v < refine_tol) return BoundaryPoint(t1, t2);
        return std::nullopt;
    };

    std::vector<BoundaryPoint> out;
    for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
            const double v = vals(a, b);
            bool local_min = true;
            for (int da = -1; da <= 1 && local_min; ++da)
                for (int db = -1; db <= 1; ++db) {
                    if (da == 0 && db == 0) continue;
                    if (vals((a + da + g) % g, (b + db + g) % g) < v) {
                        local_min = false;
                        break;
                    }
                }
            if (!local_min) continue;
            auto tau = refine(kTwoPi * a / g, kTwoPi * b / g);
            if (!tau) continue;
            bool dup = false;
            for (const auto& s : out)
                if (angle_dist(s.theta1, tau->theta1) < 1e-6 &&
                    angle_dist(s.theta2, tau->theta2) < 1e-6) {
                    dup = true;
                    break;
                }
            if (!dup) out.push_back(*tau);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.theta1 != b.theta1 ? a.theta1 < b.theta1
                                    : a.theta2 < b.theta2;
    });
    return out;
}

inline bool is_singular_at(const Rif& phi, const BoundaryPoint& tau,
                           double tol = 1e-8) {
    return std::abs(phi.denominator().eval(tau.z1(), tau.z2())) < tol;
}

namespace detail {

// lambda * phi(mu1 z1, mu2 z2) realized inside Rudin form.  Both the
// substituted denominator and its reflection pick up the same unimodular
// factor gamma chosen so numerator == reflect(denominator) exactly.
inline Rif rotated_rif(const Rif& phi, Complex mu1, Complex mu2,
                       Complex lambda) {
    const auto& c = phi.denominator().coeffs();
    const Eigen::Index n = c.rows() - 1, m = c.cols() - 1;
    const int N = phi.monomial_power1(), M = phi.monomial_power2();
    Complex lead = lambda;
    for (Eigen::Index k = 0; k < n + N; ++k) lead *= mu1;
    for (Eigen::Index k = 0; k < m + M; ++k) lead *= mu2;
    const Complex gamma = std::polar(1.0, -0.5 * std::arg(lead));

    BiPoly::CoeffGrid g(c.rows(), c.cols());
    Complex pow1{1.0, 0.0};
    for (Eigen::Index i = 0; i <= n; ++i) {
        Complex pow12 = pow1;
        for (Eigen::Index j = 0; j <= m; ++j) {
            g(i, j) = gamma * c(i, j) * pow12;
            pow12 *= mu2;
        }
        pow1 *= mu1;
    }
    return Rif(BiPoly(std::move(g)), N, M, /*check_stability=*/false);
}

// Value-only rotation lambda * phi, |lambda| = 1.
inline Rif value_rotate(const Rif& phi, Complex lambda) {
    return rotated_rif(phi, {1.0, 0.0}, {1.0, 0.0}, lambda);
}

}  // namespace detail

// Moves a singularity of phi from `source` to `target` and composes with a
// unimodular value rotation: returns lambda * phi(mu1 z1, mu2 z2) with
// mu_i = source_i / target_i.
inline Rif rotate_symbol(const Rif& phi, const BoundaryPoint& source,
                         const BoundaryPoint& target, Complex value_rotation) {
    if (std::abs(std::abs(value_rotation) - 1.0) > 1e-12)
        throw NonUnimodularTarget("value_rotation must be unimodular");
    const bool identity_rotation =
        angle_dist(source.theta1, target.theta1) < 1e-14 &&
        angle_dist(source.theta2, target.theta2) < 1e-14;
    if (!identity_rotation && !is_singular_at(phi, source))
        throw SourceNotSingular();
    const Complex mu1 = source.z1() / target.z1();
    const Complex mu2 = source.z2() / target.z2();
    return detail::rotated_rif(phi, mu1, mu2, value_rotation);
}

}  // namespace bidisc
