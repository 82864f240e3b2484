#include "polystab/semigroup.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace polystab {

namespace {

double matrix_2norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

// V f(D) V^{-1} for f(d) = e^{td} (-d)^{-beta}
Matrix weighted_exponential(const MatrixOperator& m, double t, double beta) {
    Vector f(m.eigenvalues.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const Complex d = m.eigenvalues[i];
        Complex w = std::exp(t * d);
        if (beta != 0.0) w *= std::pow(-d, Complex(-beta, 0.0));
        f[i] = w;
    }
    return m.eigvec * f.asDiagonal() * m.eigvec_inv;
}

} // namespace

SupResult semigroup_weighted_sup(const DiagonalOperator& op, double t, double beta) {
    return sup_over_spectrum(op, [t, beta](Complex mu) {
        return t * mu.real() - beta * std::log(std::abs(mu));
    });
}

double semigroup_weighted_norm(const OperatorHandle& op, double t, double beta) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("semigroup_weighted_norm: t must be finite and >= 0");
    if (op.is_diagonal()) return semigroup_weighted_sup(op.diagonal(), t, beta).value;
    return matrix_2norm(weighted_exponential(op.matrix(), t, beta));
}

Vector semigroup_apply(const OperatorHandle& op, double t, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("semigroup_apply: vector length mismatch");
    if (op.is_diagonal()) {
        const auto& d = op.diagonal();
        Vector y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            y[i] = x[i] * std::exp(t * d.eigenvalue(static_cast<std::size_t>(i) + 1));
        return y;
    }
    return weighted_exponential(op.matrix(), t, 0.0) * x;
}

double orbit_weighted_norm(const OperatorHandle& op, double t, double beta,
                           const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("orbit_weighted_norm: vector length mismatch");
    if (op.is_diagonal()) {
        const auto& d = op.diagonal();
        double sum = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (std::abs(x[i]) == 0.0) continue;
            const Complex mu = d.eigenvalue(static_cast<std::size_t>(i) + 1);
            const double logmag = t * mu.real() - beta * std::log(std::abs(mu)) +
                                  std::log(std::abs(x[i]));
            const double m = std::exp(logmag);
            sum += m * m;
        }
        return std::sqrt(sum);
    }
    return (weighted_exponential(op.matrix(), t, beta) * x).norm();
}

std::vector<std::pair<double, double>> semigroup_decay_series(const OperatorHandle& op,
                                                              double beta,
                                                              const GridSpec& grid) {
    std::vector<std::pair<double, double>> series;
    for (double t : grid.values())
        series.emplace_back(t, semigroup_weighted_norm(op, t, beta));
    return series;
}

DecayFit semigroup_decay_fit(const OperatorHandle& op, double beta, const GridSpec& grid) {
    return loglog_fit_tail(semigroup_decay_series(op, beta, grid));
}

BoundCheck moment_inequality_check(const OperatorHandle& op, const Vector& x, double a,
                                   double theta) {
    if (!op.is_diagonal())
        throw NonDiagonal("moment_inequality_check: diagonal (normal) operators only");
    if (!(a > 0.0) || !(theta > 0.0) || !(theta < 1.0))
        throw DomainError("moment_inequality_check: need a > 0 and theta in (0,1)");
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("moment_inequality_check: vector length mismatch");

    const auto& d = op.diagonal();
    double lhs2 = 0.0, full2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double m = std::abs(d.eigenvalue(static_cast<std::size_t>(i) + 1));
        const double x2 = std::norm(x[i]);
        lhs2 += std::pow(m, 2.0 * a * theta) * x2;
        full2 += std::pow(m, 2.0 * a) * x2;
    }
    BoundCheck c;
    c.lhs = std::sqrt(lhs2);
    c.rhs = std::pow(x.norm(), 1.0 - theta) * std::pow(std::sqrt(full2), theta);
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-10);
    return c;
}

} // namespace polystab
