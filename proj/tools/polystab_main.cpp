#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "polystab/errors.hpp"
#include "polystab/reports.hpp"

namespace {

using polystab::ExperimentConfig;
using polystab::Verdict;

int finish(const polystab::ExperimentResult& res, bool quiet) {
    if (!quiet) std::cout << res.report_json.dump(2) << "\n";
    std::cerr << res.report.experiment_id << ": " << to_string(res.report.verdict) << "\n";
    return res.report.verdict == Verdict::Pass ? 0 : 1;
}

int run_single(const std::string& id, const std::string& config_path,
               const std::string& out_dir, bool quiet) {
    ExperimentConfig cfg;
    cfg.id = id;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw polystab::ConfigError("cannot open config file: " + config_path);
        nlohmann::json j;
        f >> j;
        cfg = polystab::config_from_json(j);
        if (!id.empty() && cfg.id != id)
            throw polystab::ConfigError("config experiment-id \"" + cfg.id +
                                        "\" does not match subcommand \"" + id + "\"");
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return finish(polystab::run_experiment(cfg), quiet);
}

int run_preset(const std::string& preset, const std::string& out_dir) {
    const auto summary = polystab::run_suite(preset, out_dir);
    for (const auto& row : summary.rows)
        std::printf("%-28s %-13s %s\n", row.id.c_str(), to_string(row.verdict).c_str(),
                    row.detail.c_str());
    return summary.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polystab: numerical checks of polynomial semigroup decay and "
                 "Cayley-transform power decay"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset = "all", experiment_id;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config JSON file");
        sub->add_option("--out", out_dir, "directory for report.json and CSV series");
        sub->add_flag("-q,--quiet", quiet, "suppress the JSON report on stdout");
    };

    struct Alias {
        const char* name;
        const char* id;
        const char* help;
    };
    const Alias aliases[] = {
        {"semigroup-decay", "paper-example-semigroup",
         "weighted semigroup decay of the explicit diagonal example"},
        {"cayley-decay", "paper-example-cayley",
         "weighted Cayley-power decay of the explicit diagonal example"},
        {"lyapunov", "lyapunov-crossval",
         "cross-validate direct and integral Lyapunov solutions"},
        {"perturb", "perturbation",
         "structured perturbation A + r/A: stability and rate checks"},
    };
    for (const auto& a : aliases) add_common(app.add_subcommand(a.name, a.help));

    auto* run = app.add_subcommand("run", "run one registered experiment by id");
    run->add_option("id", experiment_id, "experiment id")->required();
    add_common(run);

    auto* example = app.add_subcommand(
        "example-paper", "run the full battery for the explicit diagonal example");
    example->add_option("--out", out_dir, "output directory");

    auto* suite = app.add_subcommand("suite", "run an experiment preset");
    suite->add_option("--preset", preset, "paper | properties | all");
    suite->add_option("--out", out_dir, "output directory");

    auto* list = app.add_subcommand("list", "list registered experiment ids");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& id : polystab::registered_experiments())
                std::cout << id << "\n";
            return 0;
        }
        if (example->parsed()) return run_preset("paper", out_dir);
        if (suite->parsed()) return run_preset(preset, out_dir);
        if (run->parsed()) return run_single(experiment_id, config_path, out_dir, quiet);
        for (const auto& a : aliases)
            if (app.get_subcommand(a.name)->parsed())
                return run_single(a.id, config_path, out_dir, quiet);
        return 2;
    } catch (const polystab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
