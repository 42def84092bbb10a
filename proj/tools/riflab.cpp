// riflab: configuration-driven experiments on rational inner functions of
// the bidisc and the weighted volumes they pull back.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bidisc/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rational inner function / weighted Bergman volume lab"};
    std::string config_path, seed_str, output, format;
    int workers = 0;
    app.add_option("--config", config_path, "experiment config file")
        ->required();
    app.add_option("--seed", seed_str, "seed (decimal or 0x hex)");
    app.add_option("--workers", workers,
                   "worker threads (default: hardware parallelism)");
    app.add_option("--output", output, "report file path");
    app.add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    CLI11_PARSE(app, argc, argv);

    bidisc::ExperimentConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw bidisc::ConfigError("cannot open " + config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = bidisc::parse_config(ss.str());
        if (!seed_str.empty()) cfg.seed = bidisc::io::parse_seed(seed_str);
        if (!output.empty()) cfg.output = output;
        if (!format.empty()) cfg.format = format;
    } catch (const bidisc::Error& e) {
        std::cerr << e.name << ": " << e.what() << '\n';
        return 2;
    }

    const auto res = bidisc::run_experiment(cfg, workers);
    if (res.exit_code != 0) {
        std::cerr << res.error_name << '\n';
        return res.exit_code;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
        std::cerr << "ConfigError: cannot write " << cfg.output << '\n';
        return 2;
    }
    out << res.report;
    std::cout << res.summary << " -> " << cfg.output << '\n';
    return 0;
}
