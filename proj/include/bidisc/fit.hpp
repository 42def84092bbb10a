#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "bidisc/errors.hpp"

namespace bidisc {

struct ExponentFit {
    double exponent = 0.0;
    double log_constant = 0.0;
    bool with_log_correction = false;
    double residual_rms = 0.0;
    std::vector<std::pair<double, double>> window;  // (scale, value), scales decreasing
};

// Least squares of ln(value) against ln(scale).  With the log correction the
// coefficient of ln ln(1/scale) is pinned to 1 (fit ln v - ln ln(1/s)
// linearly); a free coefficient is unidentifiable over a few decades.
inline ExponentFit fit_scaling_exponent(
    std::vector<std::pair<double, double>> points, bool with_log_correction) {
    if (points.size() < 4)
        throw DegenerateFit("need at least 4 (scale, value) points");
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto [s, v] = points[i];
        if (!(s > 0.0) || !(v > 0.0))
            throw DegenerateFit("scales and values must be positive");
        if (i > 0 && points[i - 1].first == s)
            throw DegenerateFit("duplicate scale");
        X(i, 0) = std::log(s);
        X(i, 1) = 1.0;
        y(i) = std::log(v);
        if (with_log_correction) {
            if (!(s < 1.0))
                throw DegenerateFit("log correction needs scales < 1");
            y(i) -= std::log(std::log(1.0 / s));
        }
    }
    const Eigen::Vector2d coef =
        X.colPivHouseholderQr().solve(y);
    if (!coef.allFinite()) throw DegenerateFit("collinear scales");

    ExponentFit fit;
    fit.exponent = coef(0);
    fit.log_constant = coef(1);
    fit.with_log_correction = with_log_correction;
    fit.residual_rms = std::sqrt((X * coef - y).squaredNorm() /
                                 static_cast<double>(n));
    fit.window = std::move(points);
    return fit;
}

}  // namespace bidisc
