#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "polystab/reports.hpp"

using namespace polystab;
namespace fs = std::filesystem;

TEST_CASE("verdicts render as stable strings") {
    CHECK(to_string(Verdict::Pass) == "PASS");
    CHECK(to_string(Verdict::Fail) == "FAIL");
    CHECK(to_string(Verdict::Inconclusive) == "INCONCLUSIVE");
}

TEST_CASE("experiment registry lists both presets") {
    CHECK(registered_experiments().size() == 13);
    CHECK(preset_experiments("paper").size() == 8);
    CHECK(preset_experiments("properties").size() == 5);
    CHECK(preset_experiments("all").size() == 13);
    CHECK_THROWS_AS(preset_experiments("weekly"), ConfigError);
}

TEST_CASE("config parsing validates shape and id") {
    nlohmann::json good = {{"experiment-id", "scalar-identities"},
                           {"parameters", {{"trials", 10}}},
                           {"outputs", "/tmp/somewhere"}};
    auto cfg = config_from_json(good);
    CHECK(cfg.id == "scalar-identities");
    CHECK(cfg.out_dir == "/tmp/somewhere");
    CHECK(cfg.parameters.at("trials") == 10);

    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"parameters", 7}}), ConfigError);
    nlohmann::json bad_params = {{"experiment-id", "x"}, {"parameters", 7}};
    CHECK_THROWS_AS(config_from_json(bad_params), ConfigError);

    ExperimentConfig unknown;
    unknown.id = "does-not-exist";
    CHECK_THROWS_AS(run_experiment(unknown), ConfigError);
}

TEST_CASE("scalar identity suite passes and reports its checks") {
    ExperimentConfig cfg;
    cfg.id = "scalar-identities";
    auto res = run_experiment(cfg);
    CHECK(res.report.verdict == Verdict::Pass);
    CHECK(res.report_json.at("verdict") == "PASS");
    CHECK(res.report_json.at("experiment_id") == "scalar-identities");
    CHECK(res.report_json.at("checks").at("gautschi_passed") == 50);
}

TEST_CASE("oracle equivalence passes at a reduced dimension") {
    ExperimentConfig cfg;
    cfg.id = "oracle-equivalence";
    cfg.parameters = {{"truncation", 8}};
    auto res = run_experiment(cfg);
    CHECK(res.report.verdict == Verdict::Pass);
    CHECK(res.report_json.at("checks").at("worst_rel_err").get<double>() <= 1e-10);
}

TEST_CASE("reruns of the same config produce identical reports") {
    ExperimentConfig cfg;
    cfg.id = "oracle-equivalence";
    cfg.parameters = {{"truncation", 6}};
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    CHECK(a.report_json == b.report_json);
}

TEST_CASE("custom operators are accepted and hashed into the report") {
    ExperimentConfig cfg;
    cfg.id = "paper-example-semigroup";
    cfg.operator_json = {{"type", "diagonal"}, {"formula", "paper-example"}, {"truncation", 64}};
    cfg.parameters = {{"t_max", 100.0}, {"grid_points", 12}};
    auto res = run_experiment(cfg);
    CHECK(res.report_json.at("operator_hash").get<std::uint64_t>() != 0);
}

TEST_CASE("experiment outputs land in a per-experiment directory") {
    const fs::path dir = fs::temp_directory_path() / "polystab-test-out";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.id = "paper-example-semigroup";
    cfg.parameters = {{"t_max", 200.0}, {"grid_points", 10}};
    cfg.out_dir = dir.string();
    auto res = run_experiment(cfg);
    CHECK(fs::exists(dir / cfg.id / "report.json"));
    CHECK(fs::exists(dir / cfg.id / "metadata.json"));
    CHECK(fs::exists(dir / cfg.id / "series.csv"));
    CHECK(res.data_files.size() == 1);

    std::ifstream f(dir / cfg.id / "report.json");
    nlohmann::json back;
    f >> back;
    CHECK(back.at("experiment_id") == cfg.id);
    CHECK(back.contains("claim"));
    CHECK(back.contains("verdict"));
    fs::remove_all(dir);
}
