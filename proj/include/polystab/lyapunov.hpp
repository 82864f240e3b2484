#pragma once

#include "polystab/lyapunov_types.hpp"
#include "polystab/operators.hpp"
#include "polystab/quadfit.hpp"

namespace polystab {

// (A - xi I)^* Q + Q (A - xi I) = -I solved as an n^2 x n^2 linear system.
LyapunovSolution lyapunov_solve_direct(const MatrixOperator& op, double xi);

// Q(xi) = int_0^inf e^{-2 xi t} T(t)^* T(t) dt.  Diagonal: closed form
// Q_kk = 1/(2(xi - Re mu_k)); matrix: adaptive quadrature in the eigenbasis.
LyapunovSolution lyapunov_integral(const OperatorHandle& op, double xi, double tol);

// Lyapunov solution for any operator class (closed form / direct).
LyapunovSolution lyapunov_solve(const OperatorHandle& op, double xi);

struct PlancherelCheck {
    double lhs = 0.0;  // <x, Q(xi) x>
    double rhs = 0.0;  // (1/2pi) int ||R(xi + i eta, A) x||^2 d eta
    double rel_err = 0.0;
};

PlancherelCheck plancherel_check(const OperatorHandle& op, double xi, const Vector& x);

// h_gamma(xi) <(-A)^{-alpha gamma} x, Q(xi) (-A)^{-alpha gamma} x> over the
// xi-grid (scanned in decreasing xi); "vanishing" when the last value is
// below 0.1x the first and the tail is monotone.
ScanSeries lyapunov_limit_scan(const OperatorHandle& op, double alpha, double gamma,
                               const Vector& x, const GridSpec& xi_grid);

// ||T(t)x|| <= (M e^{xi t} / (2 t sqrt(pi xi))) (int ||R(xi+i eta,A)x||^2 d eta)^{1/2}
BoundCheck trajectory_bound_check(const OperatorHandle& op, const Vector& x, double xi,
                                  double t);

// (1/2pi) int ||R(xi + i eta, A) x||^2 d eta by adaptive quadrature, with the
// core interval split at the spectrum ordinates.
double resolvent_energy_integral(const OperatorHandle& op, double xi, const Vector& x,
                                 double tol = 1e-9);

constexpr double kXiFloor = 1e-8;  // scans below this must use closed forms

} // namespace polystab
