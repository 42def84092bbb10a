#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bidisc/bipoly.hpp"
#include "bidisc/fit.hpp"
#include "bidisc/mc.hpp"
#include "bidisc/operator_lab.hpp"
#include "bidisc/rif.hpp"

namespace bidisc::io {

using nlohmann::json;

inline json to_json(const BiPoly& p) {
    json coeffs = json::array();
    const auto& c = p.coeffs();
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            coeffs.push_back({c(i, j).real(), c(i, j).imag()});
    return {{"bidegree", {c.rows() - 1, c.cols() - 1}}, {"coeffs", coeffs}};
}

inline BiPoly poly_from_json(const json& j) {
    const auto bidegree = j.at("bidegree");
    const Eigen::Index n = bidegree.at(0).get<Eigen::Index>();
    const Eigen::Index m = bidegree.at(1).get<Eigen::Index>();
    const auto& coeffs = j.at("coeffs");
    if (static_cast<Eigen::Index>(coeffs.size()) != (n + 1) * (m + 1))
        throw Error("ParseError", "coefficient count does not match bidegree");
    BiPoly::CoeffGrid g(n + 1, m + 1);
    for (Eigen::Index i = 0; i <= n; ++i)
        for (Eigen::Index j2 = 0; j2 <= m; ++j2) {
            const auto& e = coeffs.at(i * (m + 1) + j2);
            g(i, j2) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return BiPoly(std::move(g));
}

// A RIF serializes as its denominator grid plus the monomial powers; the
// numerator is reconstructed as the reflection.
inline json to_json(const Rif& phi) {
    json j = to_json(phi.denominator());
    j["monomial_powers"] = {phi.monomial_power1(), phi.monomial_power2()};
    return j;
}

inline Rif rif_from_json(const json& j) {
    int n = 0, m = 0;
    if (j.contains("monomial_powers")) {
        n = j["monomial_powers"].at(0).get<int>();
        m = j["monomial_powers"].at(1).get<int>();
    }
    return Rif(poly_from_json(j), n, m);
}

inline json to_json(const VolumeEstimate& e) {
    return {{"value", e.value},
            {"std_error", e.std_error},
            {"samples", e.samples},
            {"seed", e.seed}};
}

inline json to_json(const ExponentFit& f) {
    json window = json::array();
    for (const auto& [s, v] : f.window) window.push_back({s, v});
    return {{"exponent", f.exponent},
            {"log_constant", f.log_constant},
            {"with_log_correction", f.with_log_correction},
            {"residual_rms", f.residual_rms},
            {"window", window}};
}

inline json to_json(const LojasiewiczEstimate& e) {
    json env = json::array();
    for (const auto& [m, g] : e.envelope_points) env.push_back({m, g});
    return {{"exponent_hat", e.exponent_hat},
            {"constant_hat", e.constant_hat},
            {"neighborhood",
             {{"center", {e.neighborhood.center.theta1,
                          e.neighborhood.center.theta2}},
              {"radius", e.neighborhood.radius}}},
            {"envelope_points", env},
            {"target_value", {e.target_value.real(), e.target_value.imag()}}};
}

inline json to_json(const BoundednessReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"center", {row.box.center.theta1,
                                    row.box.center.theta2}},
                        {"delta", {row.box.delta1, row.box.delta2}},
                        {"pullback", to_json(row.pullback)},
                        {"box_volume", to_json(row.box_volume)},
                        {"ratio", row.ratio}});
    json j = {{"symbol", r.symbol_name}, {"beta", r.beta},   {"a", r.a},
              {"q_used", r.q_used},      {"ratio_table", rows},
              {"sup_ratio", r.sup_ratio}, {"growth_flag", r.growth_flag}};
    if (r.pullback_fit) j["pullback_fit"] = to_json(*r.pullback_fit);
    return j;
}

inline std::string csv_format(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline std::string report_csv(const BoundednessReport& r) {
    std::ostringstream os;
    os << "center_theta1,center_theta2,delta1,delta2,pullback,pullback_se,"
          "box_volume,ratio\n";
    for (const auto& row : r.rows)
        os << csv_format(row.box.center.theta1) << ','
           << csv_format(row.box.center.theta2) << ','
           << csv_format(row.box.delta1) << ',' << csv_format(row.box.delta2)
           << ',' << csv_format(row.pullback.value) << ','
           << csv_format(row.pullback.std_error) << ','
           << csv_format(row.box_volume.value) << ','
           << csv_format(row.ratio) << '\n';
    return os.str();
}

// Seeds accepted as decimal or 0x-prefixed hex.
inline std::uint64_t parse_seed(const std::string& s) {
    try {
        if (s.size() > 2 && (s[1] == 'x' || s[1] == 'X'))
            return std::stoull(s, nullptr, 16);
        return std::stoull(s, nullptr, 10);
    } catch (const std::exception&) {
        throw ConfigError("invalid seed: " + s);
    }
}

}  // namespace bidisc::io
