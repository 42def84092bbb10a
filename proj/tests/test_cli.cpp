#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bidisc/experiments.hpp"

using namespace bidisc;

TEST_CASE("config parsing covers the flat key/value grammar") {
    const auto cfg = parse_config(
        "# sub-level volume run\n"
        "[volume-lemma]\n"
        "beta = 1.0\n"
        "scales = [0.1, 0.01, 0.001]\n"
        "samples = 50000\n"
        "seed = 0xB1D15C\n"
        "format = \"csv\"\n"
        "output = out.csv\n");
    CHECK(cfg.experiment == "volume-lemma");
    REQUIRE(cfg.beta.has_value());
    CHECK(*cfg.beta == 1.0);
    REQUIRE(cfg.scales.size() == 3);
    CHECK(cfg.scales[1] == 0.01);
    CHECK(cfg.samples == 50000);
    CHECK(cfg.seed == 0xB1D15C);
    CHECK(cfg.format == "csv");
}

TEST_CASE("seed strings parse as decimal or hex") {
    CHECK(io::parse_seed("123") == 123);
    CHECK(io::parse_seed("0xff") == 255);
    CHECK_THROWS_AS(io::parse_seed("not-a-seed"), ConfigError);
}

TEST_CASE("malformed configs are rejected, not crashed on") {
    CHECK_THROWS_AS(parse_config("experiment = made-up\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[volume-lemma]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[volume-lemma]\nbeta 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[volume-lemma]\nbeta = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[volume-lemma]\nformat = xml\n"),
                    ConfigError);
}

TEST_CASE("validation failures exit with code 2") {
    ExperimentConfig cfg;
    cfg.experiment = "volume-lemma";  // beta missing
    const auto res = run_experiment(cfg);
    CHECK(res.exit_code == 2);
    CHECK(res.error_name.find("ConfigError") == 0);
}

TEST_CASE("computational failures exit with code 3 and carry the name") {
    ExperimentConfig cfg;
    cfg.experiment = "certificate";
    cfg.symbol = "knese-pair";
    cfg.beta = 3.0;
    cfg.q = 2.0;
    cfg.samples = 10000;
    const auto res = run_experiment(cfg);
    CHECK(res.exit_code == 3);
    CHECK(res.error_name.find("BetaTooSmall") != std::string::npos);
}

TEST_CASE("reflect-check reports the Knese numerator") {
    ExperimentConfig cfg;
    cfg.experiment = "reflect-check";
    cfg.symbol = "knese";
    const auto res = run_experiment(cfg);
    REQUIRE(res.exit_code == 0);
    const auto j = io::json::parse(res.report);
    CHECK(j["involution_deviation"].get<double>() == 0.0);
    const Rif phi = io::rif_from_json(j["denominator"]);
    CHECK(phi.numerator().coeffs()(1, 1) == Complex(2, 0));
}

TEST_CASE("volume-lemma reports the Lemma-3 exponent") {
    ExperimentConfig cfg;
    cfg.experiment = "volume-lemma";
    cfg.beta = 1.0;
    cfg.samples = 100000;
    cfg.scales = {0.1, 0.01};
    const auto res = run_experiment(cfg);
    REQUIRE(res.exit_code == 0);
    const auto j = io::json::parse(res.report);
    CHECK(std::fabs(j["fit"]["exponent"].get<double>() - 2.0) < 0.05);
}

TEST_CASE("nt-limit experiment hits the Knese value") {
    ExperimentConfig cfg;
    cfg.experiment = "nt-limit";
    cfg.symbol = "knese";
    const auto res = run_experiment(cfg);
    REQUIRE(res.exit_code == 0);
    const auto j = io::json::parse(res.report);
    CHECK(std::fabs(j["value"][0].get<double>() + 1.0) < 1e-8);
}

TEST_CASE("reports are byte-identical across worker counts") {
    ExperimentConfig cfg;
    cfg.experiment = "box-scaling";
    cfg.a = 0.0;
    cfg.samples = 100000;
    cfg.scales = {0.25, 0.125, 0.0625, 0.03125};
    const auto r1 = run_experiment(cfg, 1);
    const auto r4 = run_experiment(cfg, 4);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.report == r4.report);
}

TEST_CASE("csv output carries the header row") {
    ExperimentConfig cfg;
    cfg.experiment = "volume-lemma";
    cfg.beta = 0.0;
    cfg.samples = 20000;
    cfg.format = "csv";
    const auto res = run_experiment(cfg);
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.rfind("delta,exact,mc,mc_se\n", 0) == 0);
}
