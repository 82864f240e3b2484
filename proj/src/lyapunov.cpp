#include "polystab/lyapunov.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "polystab/semigroup.hpp"

namespace polystab {

namespace {

// residual of the Lyapunov identity for S = A - xi I
double lyapunov_residual(const Matrix& a, double xi, const Matrix& q) {
    Matrix s = a;
    s.diagonal().array() -= xi;
    const Matrix lhs = s.adjoint() * q + q * s;
    return (lhs + Matrix::Identity(a.rows(), a.cols())).norm();
}

void validate_solution(LyapunovSolution& sol) {
    const double scale = std::max(sol.q.norm(), 1e-300);
    if ((sol.q - sol.q.adjoint()).norm() > 1e-10 * scale)
        throw SingularSystem("lyapunov: solution is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.q);
    if (es.eigenvalues()(0) < -1e-10 * scale)
        throw SingularSystem("lyapunov: solution is not positive semidefinite");
}

Matrix diagonal_closed_form(const DiagonalOperator& op, double xi) {
    const auto n = static_cast<Eigen::Index>(op.truncation());
    Matrix q = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        q(i, i) = 1.0 / (2.0 * (xi - op.eigenvalue(static_cast<std::size_t>(i) + 1).real()));
    return q;
}

} // namespace

double LyapunovSolution::quadratic_form(const Vector& x) const {
    return std::real(x.dot(q * x));
}

LyapunovSolution lyapunov_solve_direct(const MatrixOperator& op, double xi) {
    if (!(xi > 0.0)) throw DomainError("lyapunov_solve_direct: xi must be positive");
    const Eigen::Index n = op.dim();
    Matrix s = op.entries;
    s.diagonal().array() -= xi;

    // vec((A-xi)^* Q + Q (A-xi)) = (I (x) S^* + S^T (x) I) vec(Q)
    Matrix sys = Matrix::Zero(n * n, n * n);
    const Matrix sadj = s.adjoint();
    const Matrix strn = s.transpose();
    for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::Index row = 0; row < n; ++row) {
            const Eigen::Index vc = col * n + row;
            for (Eigen::Index i = 0; i < n; ++i) {
                sys(col * n + i, vc) += sadj(i, row);  // S^* Q, column block col
                sys(i * n + row, vc) += strn(i, col);  // Q S
            }
        }
    Vector rhs = Vector::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) rhs[i * n + i] = Complex(-1.0, 0.0);

    Eigen::PartialPivLU<Matrix> lu(sys);
    const Vector qv = lu.solve(rhs);
    if (!qv.allFinite())
        throw SingularSystem("lyapunov_solve_direct: singular Lyapunov system");

    LyapunovSolution sol;
    sol.xi = xi;
    sol.method = LyapunovMethod::Direct;
    sol.q = Matrix(n, n);
    for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::Index row = 0; row < n; ++row) sol.q(row, col) = qv[col * n + row];
    sol.q = 0.5 * (sol.q + sol.q.adjoint().eval());
    sol.residual = lyapunov_residual(op.entries, xi, sol.q);
    validate_solution(sol);
    return sol;
}

LyapunovSolution lyapunov_integral(const OperatorHandle& op, double xi, double tol) {
    if (!(xi > 0.0)) throw DomainError("lyapunov_integral: xi must be positive");
    LyapunovSolution sol;
    sol.xi = xi;
    if (op.is_diagonal()) {
        sol.method = LyapunovMethod::ClosedForm;
        sol.q = diagonal_closed_form(op.diagonal(), xi);
        sol.residual = 0.0;
        return sol;
    }

    // T(t)^* T(t) = V^{-*} e^{t conj(D)} (V^* V) e^{t D} V^{-1}; each eigenbasis
    // entry integrates a scalar exponential e^{(conj(d_i) + d_j - 2 xi) t}.
    const auto& m = op.matrix();
    const Eigen::Index n = m.dim();
    const Matrix gram = m.eigvec.adjoint() * m.eigvec;
    Matrix core(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Complex rate = std::conj(m.eigenvalues[i]) + m.eigenvalues[j] - 2.0 * xi;
            auto re = adaptive_quad(
                [rate](double t) { return std::real(std::exp(rate * t)); }, 0.0, kInf, tol);
            auto im = adaptive_quad(
                [rate](double t) { return std::imag(std::exp(rate * t)); }, 0.0, kInf, tol);
            core(i, j) = gram(i, j) * Complex(re.value, im.value);
            if (j != i) core(j, i) = std::conj(core(i, j));
        }
    }
    sol.method = LyapunovMethod::Integral;
    sol.q = m.eigvec_inv.adjoint() * core * m.eigvec_inv;
    sol.q = 0.5 * (sol.q + sol.q.adjoint().eval());
    sol.residual = lyapunov_residual(m.entries, xi, sol.q);
    validate_solution(sol);
    return sol;
}

LyapunovSolution lyapunov_solve(const OperatorHandle& op, double xi) {
    if (op.is_diagonal()) return lyapunov_integral(op, xi, 1e-10);
    return lyapunov_solve_direct(op.matrix(), xi);
}

double resolvent_energy_integral(const OperatorHandle& op, double xi, const Vector& x,
                                 double tol) {
    double im_max = 0.0;
    std::vector<double> breakpoints;
    for (const Complex& mu : op.eigenvalues()) {
        im_max = std::max(im_max, std::fabs(mu.imag()));
        breakpoints.push_back(mu.imag());
    }
    const double core = std::max(10.0, 10.0 * im_max);
    breakpoints.push_back(-core);
    breakpoints.push_back(core);

    auto f = [&](double eta) {
        const Vector y = apply_resolvent(op, Complex(xi, eta), x);
        return y.squaredNorm();
    };
    const auto q = adaptive_quad(f, -kInf, kInf, tol, breakpoints);
    return q.value / (2.0 * std::numbers::pi);
}

PlancherelCheck plancherel_check(const OperatorHandle& op, double xi, const Vector& x) {
    if (!(xi > 0.0)) throw DomainError("plancherel_check: xi must be positive");
    if (x.norm() == 0.0) throw DomainError("plancherel_check: probe must be nonzero");
    PlancherelCheck c;
    c.lhs = lyapunov_solve(op, xi).quadratic_form(x);
    c.rhs = resolvent_energy_integral(op, xi, x);
    c.rel_err = std::fabs(c.lhs - c.rhs) / std::fabs(c.lhs);
    return c;
}

ScanSeries lyapunov_limit_scan(const OperatorHandle& op, double alpha, double gamma,
                               const Vector& x, const GridSpec& xi_grid) {
    if (!(gamma > 0.0) || gamma > 0.5)
        throw DomainError("lyapunov_limit_scan: gamma must lie in (0, 1/2]");
    if (xi_grid.start < kXiFloor)
        throw DomainError("lyapunov_limit_scan: xi grid below floor");
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("lyapunov_limit_scan: probe length mismatch");

    // weighted probe w = (-A)^{-alpha gamma} x
    const auto weights = frac_power_weights(op, alpha * gamma);
    Vector w;
    if (op.is_diagonal()) {
        w = x;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w[i] *= weights[static_cast<std::size_t>(i)];
    } else {
        const auto& m = op.matrix();
        Vector f(m.eigenvalues.size());
        for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = weights[static_cast<std::size_t>(i)];
        w = m.eigvec * f.asDiagonal() * m.eigvec_inv * x;
    }

    std::vector<double> xis = xi_grid.values();
    std::sort(xis.begin(), xis.end(), std::greater<>());

    ScanSeries series;
    for (double xi : xis) {
        double form;
        if (op.is_diagonal()) {
            const auto& d = op.diagonal();
            form = 0.0;
            for (Eigen::Index i = 0; i < w.size(); ++i)
                form += std::norm(w[i]) /
                        (2.0 * (xi - d.eigenvalue(static_cast<std::size_t>(i) + 1).real()));
        } else {
            form = lyapunov_solve(op, xi).quadratic_form(w);
        }
        series.entries.emplace_back(xi, h_gamma(gamma, std::min(xi, 1.0 - 1e-12)) * form);
    }

    const double first = series.entries.front().second;
    const double last = series.entries.back().second;
    bool tail_monotone = true;
    const std::size_t tail_start = series.entries.size() / 2;
    for (std::size_t i = tail_start + 1; i < series.entries.size(); ++i)
        if (series.entries[i].second > series.entries[i - 1].second * (1.0 + 1e-12))
            tail_monotone = false;
    series.vanishing = last < 0.1 * first && tail_monotone;
    return series;
}

BoundCheck trajectory_bound_check(const OperatorHandle& op, const Vector& x, double xi,
                                  double t) {
    if (!(xi > 0.0) || !(t > 0.0))
        throw DomainError("trajectory_bound_check: xi and t must be positive");
    BoundCheck c;
    c.lhs = orbit_weighted_norm(op, t, 0.0, x);

    double m = 1.0;  // diagonal semigroups here are contractions
    if (!op.is_diagonal()) {
        for (int i = 0; i <= 50; ++i)
            m = std::max(m, semigroup_weighted_norm(op, 2.0 * t * i / 50.0, 0.0));
    }
    const double integral = 2.0 * std::numbers::pi * resolvent_energy_integral(op, xi, x);
    c.rhs = m * std::exp(xi * t) / (2.0 * t * std::sqrt(std::numbers::pi * xi)) *
            std::sqrt(integral);
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-6);
    return c;
}

} // namespace polystab
