#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bidisc/io.hpp"
#include "bidisc/operator_lab.hpp"
#include "bidisc/zoo.hpp"

namespace bidisc {

// One experiment description, parsed from a flat key = value config file
// (one optional [experiment] table header).  Defaults are chosen so the
// coarsest-scale relative std error stays around or below 2%.
struct ExperimentConfig {
    std::string experiment;
    std::string symbol = "knese";
    double angle_a = std::numbers::pi / 3.0;
    double angle_b = 1.0;
    std::string symbol_file;
    std::optional<double> beta;
    std::optional<double> a;
    std::optional<double> q;
    std::vector<double> scales;
    std::uint64_t samples = 0;  // 0: per-experiment default
    std::uint64_t seed = 0xB1D15C;
    int bins = 32;
    double radius = 0.3;
    int grid = 16;
    double center_theta1 = 0.0;
    double center_theta2 = 0.0;
    double aspect = 1.0;
    std::string output = "report.json";
    std::string format = "json";
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(std::string v) {
    if (!v.empty() && v.front() == '[') v = v.substr(1, v.size() - 2);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("invalid number in list: " + item);
        }
    }
    return out;
}

inline double parse_num(const std::string& key, const std::string& v) {
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + key + ": " + v);
    }
}

}  // namespace detail

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "reflect-check", "volume-lemma", "box-scaling", "nt-limit",
        "zero-set",      "lojasiewicz",  "certificate", "sweep"};
    return names;
}

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            cfg.experiment = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value: " + line);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        auto unquote = [](std::string s) {
            if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
                return s.substr(1, s.size() - 2);
            return s;
        };
        if (key == "experiment") cfg.experiment = unquote(val);
        else if (key == "symbol") cfg.symbol = unquote(val);
        else if (key == "symbol_file") cfg.symbol_file = unquote(val);
        else if (key == "angle_a") cfg.angle_a = detail::parse_num(key, val);
        else if (key == "angle_b") cfg.angle_b = detail::parse_num(key, val);
        else if (key == "beta") cfg.beta = detail::parse_num(key, val);
        else if (key == "a") cfg.a = detail::parse_num(key, val);
        else if (key == "q") cfg.q = detail::parse_num(key, val);
        else if (key == "scales") cfg.scales = detail::parse_list(val);
        else if (key == "samples")
            cfg.samples = static_cast<std::uint64_t>(
                detail::parse_num(key, val));
        else if (key == "seed") cfg.seed = io::parse_seed(unquote(val));
        else if (key == "bins")
            cfg.bins = static_cast<int>(detail::parse_num(key, val));
        else if (key == "radius") cfg.radius = detail::parse_num(key, val);
        else if (key == "grid")
            cfg.grid = static_cast<int>(detail::parse_num(key, val));
        else if (key == "center_theta1")
            cfg.center_theta1 = detail::parse_num(key, val);
        else if (key == "center_theta2")
            cfg.center_theta2 = detail::parse_num(key, val);
        else if (key == "aspect") cfg.aspect = detail::parse_num(key, val);
        else if (key == "output") cfg.output = unquote(val);
        else if (key == "format") cfg.format = unquote(val);
        else throw ConfigError("unknown key: " + key);
    }
    bool known = false;
    for (const auto& n : experiment_names()) known |= (n == cfg.experiment);
    if (!known) throw ConfigError("unknown experiment: " + cfg.experiment);
    if (cfg.format != "json" && cfg.format != "csv")
        throw ConfigError("format must be json or csv");
    return cfg;
}

inline Rif resolve_symbol(const ExperimentConfig& cfg) {
    if (!cfg.symbol_file.empty()) {
        std::ifstream in(cfg.symbol_file);
        if (!in) throw ConfigError("cannot open " + cfg.symbol_file);
        return io::rif_from_json(io::json::parse(in));
    }
    if (cfg.symbol == "knese") return zoo::knese();
    if (cfg.symbol == "phi_ab" || cfg.symbol == "phi-ab")
        return zoo::phi_ab(cfg.angle_a, cfg.angle_b);
    if (cfg.symbol == "z1") return zoo::coordinate1();
    if (cfg.symbol == "z2") return zoo::coordinate2();
    throw ConfigError("unknown symbol: " + cfg.symbol);
}

inline SymbolPair resolve_pair(const ExperimentConfig& cfg) {
    if (!cfg.symbol_file.empty()) {
        std::ifstream in(cfg.symbol_file);
        if (!in) throw ConfigError("cannot open " + cfg.symbol_file);
        const auto j = io::json::parse(in);
        if (j.contains("first"))
            return {io::rif_from_json(j["first"]),
                    io::rif_from_json(j["second"])};
        const Rif one = io::rif_from_json(j);
        return {one, one};
    }
    if (cfg.symbol == "knese-pair") return zoo::knese_pair();
    if (cfg.symbol == "phi-ab-pair" || cfg.symbol == "phi_ab-pair")
        return zoo::phi_ab_pair(cfg.angle_a, cfg.angle_b);
    if (cfg.symbol == "identity-pair") return zoo::identity_pair();
    const Rif one = resolve_symbol(cfg);
    return {one, one};
}

struct RunResult {
    int exit_code = 0;
    std::string summary;
    std::string report;
    std::string error_name;
};

inline std::vector<double> dyadic_scales(int lo, int hi) {
    std::vector<double> s;
    for (int k = lo; k <= hi; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

namespace detail {

inline RunResult run_impl(const ExperimentConfig& cfg, int workers) {
    RunResult res;
    std::ostringstream summary;
    io::json report;
    std::string csv;
    const bool want_csv = cfg.format == "csv";

    if (cfg.experiment == "reflect-check") {
        const Rif phi = resolve_symbol(cfg);
        const BiPoly twice = reflect(reflect(phi.denominator()));
        const double dev =
            (twice.coeffs() - phi.denominator().coeffs()).cwiseAbs().maxCoeff();
        report = {{"denominator", io::to_json(phi.denominator())},
                  {"numerator", io::to_json(phi.numerator())},
                  {"involution_deviation", dev}};
        summary << "reflect-check max involution deviation " << dev;
    } else if (cfg.experiment == "volume-lemma") {
        if (!cfg.beta) throw ConfigError("volume-lemma requires beta");
        const WeightParams w{*cfg.beta};
        w.require_integrable();
        std::vector<double> scales =
            cfg.scales.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3}
                               : cfg.scales;
        const std::uint64_t n = cfg.samples ? cfg.samples : 1000000;
        io::json table = io::json::array();
        std::ostringstream os;
        os << "delta,exact,mc,mc_se\n";
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const double delta = scales[i];
            const double exact = sublevel_volume_exact(w, delta);
            const auto mc = weighted_volume_mc(
                [delta](Complex z1, Complex z2) {
                    return (1.0 - std::norm(z1)) * (1.0 - std::norm(z2)) <=
                           delta;
                },
                w, n, cfg.seed, workers, 0x500 + i);
            table.push_back({{"delta", delta},
                             {"exact", exact},
                             {"mc", io::to_json(mc)}});
            os << io::csv_format(delta) << ',' << io::csv_format(exact) << ','
               << io::csv_format(mc.value) << ','
               << io::csv_format(mc.std_error) << '\n';
        }
        // The exponent fit runs on the exact values over a wide grid; the MC
        // column is the stochastic cross-check.
        std::vector<std::pair<double, double>> pts;
        for (double d : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6})
            pts.emplace_back(d, sublevel_volume_exact(w, d));
        const ExponentFit fit = fit_scaling_exponent(pts, true);
        report = {{"beta", w.beta},
                  {"table", table},
                  {"fit", io::to_json(fit)}};
        csv = os.str();
        summary << "volume-lemma fitted exponent " << fit.exponent
                << " (expect " << w.beta + 1.0 << ")";
    } else if (cfg.experiment == "box-scaling") {
        const double a = cfg.a ? *cfg.a : (cfg.beta ? *cfg.beta : 0.0);
        const WeightParams w{a};
        w.require_integrable();
        std::vector<double> scales =
            cfg.scales.empty() ? dyadic_scales(2, 9) : cfg.scales;
        const std::uint64_t n = cfg.samples ? cfg.samples : 1000000;
        const BoundaryPoint center(cfg.center_theta1, cfg.center_theta2);
        io::json table = io::json::array();
        std::ostringstream os;
        os << "scale,value,std_error\n";
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const CarlesonBox box{center, scales[i], scales[i]};
            const auto est =
                carleson_box_volume(w, box, n, cfg.seed, workers, 0x600 + i);
            table.push_back(
                {{"scale", scales[i]}, {"estimate", io::to_json(est)}});
            os << io::csv_format(scales[i]) << ',' << io::csv_format(est.value)
               << ',' << io::csv_format(est.std_error) << '\n';
            if (est.value > 0.0) pts.emplace_back(scales[i], est.value);
        }
        const ExponentFit fit = fit_scaling_exponent(pts, false);
        report = {{"a", a}, {"table", table}, {"fit", io::to_json(fit)}};
        csv = os.str();
        summary << "box-scaling fitted exponent " << fit.exponent
                << " (expect " << 2.0 * (a + 2.0) << ")";
    } else if (cfg.experiment == "nt-limit") {
        const Rif phi = resolve_symbol(cfg);
        const BoundaryPoint zeta(cfg.center_theta1, cfg.center_theta2);
        const auto nt = nt_limit(phi, zeta);
        report = {{"value", {nt.value.real(), nt.value.imag()}},
                  {"modulus", nt.modulus},
                  {"rate", nt.rate}};
        summary << "nt-limit value (" << nt.value.real() << ", "
                << nt.value.imag() << ") modulus " << nt.modulus;
    } else if (cfg.experiment == "zero-set") {
        const Rif phi = resolve_symbol(cfg);
        io::json table = io::json::array();
        std::ostringstream os;
        os << "margin,zeta_angle,min_abs\n";
        double overall = std::numeric_limits<double>::infinity();
        for (double margin : {0.05, 0.1, 0.2}) {
            for (int k = 0; k < 64; ++k) {
                const double ang = kTwoPi * k / 64;
                const BiPoly P = build_pzeta(phi.denominator(),
                                             std::polar(1.0, ang));
                const double mn =
                    zero_set_interior_check(P, margin, cfg.grid);
                overall = std::min(overall, mn);
                table.push_back({{"margin", margin},
                                 {"zeta_angle", ang},
                                 {"min_abs", mn}});
                os << io::csv_format(margin) << ',' << io::csv_format(ang)
                   << ',' << io::csv_format(mn) << '\n';
            }
        }
        report = {{"table", table}, {"overall_min", overall}};
        csv = os.str();
        summary << "zero-set overall min |P_zeta| " << overall;
    } else if (cfg.experiment == "lojasiewicz") {
        const Rif phi = resolve_symbol(cfg);
        BoundaryPoint eta(cfg.center_theta1, cfg.center_theta2);
        const auto sings = find_singularities(phi);
        if (!sings.empty() && cfg.center_theta1 == 0.0 &&
            cfg.center_theta2 == 0.0)
            eta = sings.front();
        const std::uint64_t n = cfg.samples ? cfg.samples : 200000;
        const auto est = lojasiewicz_fit(phi, eta, {eta, cfg.radius}, n,
                                         cfg.bins, cfg.seed);
        report = io::to_json(est);
        std::ostringstream os;
        os << "proximity,gap\n";
        for (const auto& [m, g] : est.envelope_points)
            os << io::csv_format(m) << ',' << io::csv_format(g) << '\n';
        csv = os.str();
        summary << "lojasiewicz q_hat " << est.exponent_hat;
    } else if (cfg.experiment == "certificate") {
        if (!cfg.beta) throw ConfigError("certificate requires beta");
        const SymbolPair sym = resolve_pair(cfg);
        std::vector<double> scales =
            cfg.scales.empty() ? dyadic_scales(2, 8) : cfg.scales;
        const std::uint64_t n = cfg.samples ? cfg.samples : 1000000;
        auto rep = theorem_certificate(sym, *cfg.beta, cfg.q, scales, n,
                                       cfg.seed, workers);
        rep.symbol_name = cfg.symbol;
        report = io::to_json(rep);
        csv = io::report_csv(rep);
        summary << "certificate sup_ratio " << rep.sup_ratio
                << " growth_flag " << (rep.growth_flag ? "true" : "false");
    } else if (cfg.experiment == "sweep") {
        if (!cfg.beta || !cfg.a)
            throw ConfigError("sweep requires beta and a");
        const SymbolPair sym = resolve_pair(cfg);
        std::vector<double> scales = cfg.scales;
        if (scales.empty())
            for (int k = 2; k <= 7; ++k)
                scales.push_back(std::pow(2.0, -0.5 * k));
        const std::uint64_t n = cfg.samples ? cfg.samples : 1000000;
        auto centers = default_sweep_centers(sym, cfg.seed);
        auto rep = carleson_sweep(sym, *cfg.beta, *cfg.a, centers, scales, n,
                                  cfg.seed, workers, cfg.aspect);
        rep.symbol_name = cfg.symbol;
        report = io::to_json(rep);
        csv = io::report_csv(rep);
        summary << "sweep sup_ratio " << rep.sup_ratio << " growth_flag "
                << (rep.growth_flag ? "true" : "false");
    }

    res.report = want_csv && !csv.empty() ? csv : report.dump(2) + "\n";
    res.summary = summary.str();
    return res;
}

}  // namespace detail

// Dispatches a validated config.  Exit code 0 on success, 2 on validation
// errors, 3 on computational errors (e.g. BetaTooSmall).
inline RunResult run_experiment(const ExperimentConfig& cfg, int workers = 0) {
    try {
        return detail::run_impl(cfg, workers);
    } catch (const ConfigError& e) {
        return {2, "", "", e.name + ": " + e.what()};
    } catch (const Error& e) {
        return {3, "", "", e.name + (std::string(e.what()) == e.name
                                         ? ""
                                         : ": " + std::string(e.what()))};
    } catch (const std::exception& e) {
        return {3, "", "", std::string("InternalError: ") + e.what()};
    }
}

}  // namespace bidisc
