#pragma once

#include <cstdint>
#include <string>

#include "polystab/quadfit.hpp"

namespace polystab {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct Guarantee {
    double exponent = 0.0;  // guaranteed decay exponent (more negative = faster)
    bool log_factor = false;
};

struct RateReport {
    std::string experiment_id;
    std::string claim;  // plain-language statement of what is being checked
    DecayFit fitted;
    Guarantee guarantee;
    Verdict verdict = Verdict::Inconclusive;
    bool maximizer_interior = true;
    std::uint64_t operator_hash = 0;
    std::string notes;
};

} // namespace polystab
