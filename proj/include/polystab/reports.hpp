#pragma once

#include <string>
#include <vector>

#include "polystab/operators.hpp"
#include "polystab/report_types.hpp"

#include "json.hpp"

namespace polystab {

struct ExperimentConfig {
    std::string id;
    nlohmann::json operator_json;  // empty -> experiment default operator
    nlohmann::json parameters;     // per-experiment overrides
    std::string out_dir;           // empty -> no files written
};

ExperimentConfig config_from_json(const nlohmann::json& j);

struct ExperimentResult {
    RateReport report;
    nlohmann::json report_json;
    std::vector<std::string> data_files;
};

// Run one registered experiment.  Deterministic: the same config produces the
// same report JSON and the same CSV rows.
ExperimentResult run_experiment(const ExperimentConfig& config);

const std::vector<std::string>& registered_experiments();
std::vector<std::string> preset_experiments(const std::string& preset);

struct SuiteSummary {
    struct Row {
        std::string id;
        Verdict verdict = Verdict::Inconclusive;
        std::string detail;
    };
    std::vector<Row> rows;
    bool all_pass = false;
};

SuiteSummary run_suite(const std::string& preset, const std::string& out_dir);

} // namespace polystab
