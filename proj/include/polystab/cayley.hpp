#pragma once

#include "polystab/lyapunov_types.hpp"
#include "polystab/operators.hpp"
#include "polystab/quadfit.hpp"

namespace polystab {

constexpr long kDiagonalHorizon = 100000000;  // 1e8
constexpr long kMatrixHorizon = 1000000;      // 1e6

// (1 + mu_k) / (1 - mu_k) per eigenvalue
std::vector<Complex> cayley_multipliers(const OperatorHandle& op);

// Cayley matrix (I + A)(I - A)^{-1} of a matrix operator
Matrix cayley_matrix(const MatrixOperator& op);

// B^n by binary powering
Matrix matrix_power(const Matrix& b, long n);

// ||A_d^n (-A)^{-beta}||.  Diagonal value via the log-domain identity
// log|((1-l)/(1+l))^n l^{-beta}| = (n/2) log(1 - 4 Re l / |1+l|^2) - beta log|l|
// over l in sigma(-A); matrix value via binary powering.
double cayley_power_weighted_norm(const OperatorHandle& op, long n, double beta);
SupResult cayley_power_weighted_sup(const DiagonalOperator& op, long n, double beta);

struct PowerBound {
    double bound = 1.0;  // M
    bool contraction = false;
    long horizon = 0;
};

// Diagonal: multipliers have modulus <= 1 (dissipative generator), M = 1.
// Matrix: M = max_{n <= horizon} ||A_d^n||, reported with its horizon.
PowerBound power_bounded_check(const OperatorHandle& op, long horizon);

std::vector<std::pair<double, double>> cayley_decay_series(const OperatorHandle& op,
                                                           double beta,
                                                           const GridSpec& grid);
DecayFit cayley_decay_fit(const OperatorHandle& op, double beta, const GridSpec& grid);

struct LiminfSequence {
    std::vector<std::pair<long, double>> entries;  // (n, n^3 ||A_d^{m n^3} (-A)^{-3}||)
    double minimum = 0.0;
};

// Optimality sequence of the explicit diagonal example (weight beta = 3).
LiminfSequence liminf_bound_check(const OperatorHandle& op, long m, long n_lo, long n_hi);

struct EnvelopeParams {
    double C2 = 1.0;
    long n = 1;
};

struct EnvelopeResult {
    double s_star = 0.0;
    double g_max = 0.0;
};

// Closed-form maximizer of g_n(s) = (n/s)(1 - C2/s)^{n/2} on [C2, inf):
// s* = C2 (n+2)/2, g_n(s*) -> 2/(e C2).
EnvelopeResult gn_envelope(const EnvelopeParams& params);

struct EnvelopeCheck {
    double sup_with_log = 0.0;     // sup (n / log n) ||A_d^n (-A)^{-alpha-2}||
    double sup_without_log = 0.0;  // sup  n          ||A_d^n (-A)^{-alpha-2}||
    bool stabilized_with_log = false;
    bool stabilized_without_log = false;
    std::vector<std::pair<long, double>> series;  // (n, ||A_d^n (-A)^{-alpha-2}||)
};

// Running sup over the n-grid; "stabilized" when the last decade of the grid
// changes the running sup by < 1%.
EnvelopeCheck dr_ct_envelope_check(const OperatorHandle& op, double alpha,
                                   const GridSpec& grid);

// (n+1) |<y, r^n A_d^n (I-A)^{-1} x>|  <=  M ||y|| sqrt(<x, Q x>/(1 - r^4))
// with 2 xi = (1-r^2)/(1+r^2) and Q the Lyapunov solution at xi.
BoundCheck guo_zwart_inequality_check(const MatrixOperator& op, const Vector& x,
                                      const Vector& y, double r, long n,
                                      const LyapunovSolution& q);
BoundCheck guo_zwart_inequality_check(const MatrixOperator& op, const Vector& x,
                                      const Vector& y, double r, long n,
                                      const LyapunovSolution& q, double power_bound);

} // namespace polystab
