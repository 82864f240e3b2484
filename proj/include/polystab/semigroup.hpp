#pragma once

#include "polystab/operators.hpp"
#include "polystab/quadfit.hpp"

namespace polystab {

// ||T(t) (-A)^{-beta}||.  Diagonal: sup_k e^{t Re mu_k} |mu_k|^{-beta} in the
// log domain, auto-refined for formula spectra.  Matrix: 2-norm of
// V e^{tD} (-D)^{-beta} V^{-1}.
double semigroup_weighted_norm(const OperatorHandle& op, double t, double beta);
SupResult semigroup_weighted_sup(const DiagonalOperator& op, double t, double beta);

// ||T(t) (-A)^{-beta} x||
double orbit_weighted_norm(const OperatorHandle& op, double t, double beta,
                           const Vector& x);

// log-log fit of t -> semigroup_weighted_norm over the grid
DecayFit semigroup_decay_fit(const OperatorHandle& op, double beta, const GridSpec& grid);

// series behind the fit, for reporting
std::vector<std::pair<double, double>> semigroup_decay_series(const OperatorHandle& op,
                                                              double beta,
                                                              const GridSpec& grid);

// ||(-A)^{a theta} x|| <= ||x||^{1-theta} ||(-A)^a x||^theta  (diagonal only,
// where the interpolation constant is 1).
BoundCheck moment_inequality_check(const OperatorHandle& op, const Vector& x, double a,
                                   double theta);

// e^{tA} x in the eigenbasis (shared with the Lyapunov lab)
Vector semigroup_apply(const OperatorHandle& op, double t, const Vector& x);

} // namespace polystab
