// Acceptance battery: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <string>

#include "polystab/reports.hpp"

using namespace polystab;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& what, double seconds) {
    std::printf("CRITERION %2d: %s  %s  (%.1fs)\n", k, ok ? "PASS" : "FAIL", what.c_str(),
                seconds);
    if (!ok) ++failures;
}

bool experiment_passes(const std::string& id, nlohmann::json* checks = nullptr) {
    ExperimentConfig cfg;
    cfg.id = id;
    try {
        auto res = run_experiment(cfg);
        if (checks) *checks = res.report_json.at("checks");
        return res.report.verdict == Verdict::Pass;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "  %s raised: %s\n", id.c_str(), e.what());
        return false;
    }
}

template <typename F>
void criterion(int k, const std::string& what, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = f();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "  criterion %d raised: %s\n", k, e.what());
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(k, ok, what, s);
}

} // namespace

int main() {
    criterion(1, "semigroup rate of the explicit example: exponent -1 +- 0.03, value at "
                 "t=100 within 1% of e^-1/100",
              [] { return experiment_passes("paper-example-semigroup"); });

    criterion(2, "Cayley rate of the explicit example: exponent -1/3 +- 0.03 with "
                 "interior maximizer",
              [] { return experiment_passes("paper-example-cayley"); });

    criterion(3, "optimality: n * cube-weighted power norm >= 0.1 and liminf floor "
                 "0.9 e^{-2m} for m in {1,3}",
              [] { return experiment_passes("paper-example-optimality"); });

    criterion(4, "log-free envelope: running sup of n * cube-weighted power norm "
                 "stabilizes",
              [] { return experiment_passes("paper-example-logfree"); });

    criterion(5, "Lyapunov cross-validation: direct vs integral to 1e-8 on 50 random "
                 "matrices",
              [] {
                  nlohmann::json c;
                  return experiment_passes("lyapunov-crossval", &c) &&
                         c.at("worst_rel_diff").get<double>() <= 1e-8;
              });

    criterion(6, "Plancherel bridge: quadratic form vs resolvent energy to 1e-5",
              [] { return experiment_passes("plancherel-bridge"); });

    criterion(7, "limit scans: 10x decrease with monotone tail for gamma in {1/4, 1/2}",
              [] { return experiment_passes("limit-scans"); });

    criterion(8, "discounted Cayley pairing bound: 100/100 random trials plus the exact "
                 "scalar case",
              [] { return experiment_passes("guo-zwart"); });

    criterion(9, "perturbation suite: Lyapunov inequality 100/100, factorization to "
                 "1e-8, perturbed rate -1 +- 0.05",
              [] { return experiment_passes("perturbation"); });

    criterion(10, "normalization: exponent scaling within 0.05 and moment inequality "
                  "1000/1000",
              [] {
                  return experiment_passes("normalization") &&
                         experiment_passes("moment-inequality");
              });

    criterion(11, "scalar identities: gamma tail, exponential-integral bound, envelope "
                  "limit",
              [] { return experiment_passes("scalar-identities"); });

    criterion(12, "oracle equivalence: matrix route matches diagonal route to 1e-10",
              [] {
                  nlohmann::json c;
                  return experiment_passes("oracle-equivalence", &c) &&
                         c.at("worst_rel_err").get<double>() <= 1e-10;
              });

    if (failures > 0)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
