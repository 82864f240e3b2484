#pragma once

#include "polystab/operators.hpp"
#include "polystab/quadfit.hpp"
#include "polystab/report_types.hpp"

namespace polystab {

struct PerturbedOperator {
    OperatorHandle base;
    double r = 0.0;
    OperatorHandle perturbed;  // spectrum mu + r/mu, or matrix A + r A^{-1}
};

// A + r A^{-1}.  Diagonal spectra map eigenvalue-wise; matrices are rebuilt
// and revalidated from the explicit sum.
PerturbedOperator perturb(const OperatorHandle& op, double r);

struct FactorizationCheck {
    Vector lhs;
    Vector rhs;
    double rel_err = 0.0;
};

// (i w - A - A^{-1})^{-1} x  vs  -A R(i w1, A) R(i w2, A) x with
// w1,2 = w/2 +- sqrt(1 + w^2/4).
FactorizationCheck resolvent_factorization_check(const OperatorHandle& op, double omega,
                                                 const Vector& x);

struct PerturbedLyapunovCheck {
    double min_eigenvalue = 0.0;  // of the hermitian part of -[(A+A^{-1}-xi)^* Q1 + Q1 (...)] - I
    bool holds = false;
    bool kappa_ok = true;  // kappa > ||A^{-1}||^2; when false the bound carries no guarantee
    double kappa_floor = 0.0;
};

PerturbedLyapunovCheck perturbed_lyapunov_check(const MatrixOperator& op, double xi,
                                                double kappa);

// Decay fit of the perturbed semigroup at weight alpha, judged against the
// guarantee: O(1/t) for alpha > 2, O(log t / t) for alpha = 2, O(1/t^{1-eps})
// for alpha < 2.
RateReport perturbed_rate_report(const OperatorHandle& op, double alpha, double r,
                                 const GridSpec& grid, double epsilon = 0.05);

} // namespace polystab
