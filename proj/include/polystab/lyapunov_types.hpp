#pragma once

#include "polystab/operators.hpp"

namespace polystab {

enum class LyapunovMethod { Direct, Integral, ClosedForm };

// Self-adjoint solution Q(xi) of (A - xi I)^* Q + Q (A - xi I) = -I.
struct LyapunovSolution {
    double xi = 0.0;
    Matrix q;
    double residual = 0.0;
    LyapunovMethod method = LyapunovMethod::ClosedForm;

    double quadratic_form(const Vector& x) const;  // <x, Q x>, real part
};

} // namespace polystab
