#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "polystab/errors.hpp"

namespace polystab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric grid in t, n or xi.  start > 0, stop > start, points >= 3.
struct GridSpec {
    double start = 1.0;
    double stop = 10.0;
    int points = 3;

    GridSpec() = default;
    GridSpec(double start_, double stop_, int points_);

    std::vector<double> values() const;
    // Same grid rounded to strictly increasing integers (for power indices).
    std::vector<long> integer_values() const;
};

// Result of a least-squares line on (log arg, log value).
struct DecayFit {
    double exponent = 0.0;      // slope
    double log_constant = 0.0;  // intercept (natural log)
    double r_squared = 0.0;
    double window_min = 0.0;    // smallest argument used
    double window_max = 0.0;    // largest argument used

    // value predicted by the fitted power law at argument a
    double predict(double a) const;
};

// (xi, value) pairs ordered by decreasing xi, plus the scan verdict.
struct ScanSeries {
    std::vector<std::pair<double, double>> entries;
    bool vanishing = false;  // last < 0.1 * first and monotone tail
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod (G7-K15) quadrature.  a and/or b may be infinite;
// infinite tails are folded back with the substitution u = 1/t past a cut
// point.  Optional breakpoints pre-split the core interval (used to resolve
// narrow resolvent peaks).
QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         double tol, const std::vector<double>& breakpoints = {});

// Least-squares power-law fit over points with argument in [window].
DecayFit loglog_fit(const std::vector<std::pair<double, double>>& points,
                    std::pair<double, double> window);

// Fit over all points, dropping the first `drop_fraction` of the argument
// range (transient regime).
DecayFit loglog_fit_tail(const std::vector<std::pair<double, double>>& points,
                         double drop_fraction = 0.1);

// Normalization weight for the limit scans:
//   xi^{1-2g} for g in (0,1/2), 1/log(1/xi) for g = 1/2.
double h_gamma(double gamma, double xi);

// Gamma function on (0,1), validated against Gamma(1/2) = sqrt(pi).
double gamma_function(double s);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Exponential-integral tail bound:
//   int_tau^inf e^{-t}/t dt  <=  e^{-tau} log(1 + 1/tau).
BoundCheck gautschi_bound_check(double tau);

} // namespace polystab
