#include "polystab/cayley.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace polystab {

namespace {

double matrix_2norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Matrix frac_power_matrix(const MatrixOperator& m, double beta) {
    Vector f(m.eigenvalues.size());
    for (Eigen::Index i = 0; i < f.size(); ++i)
        f[i] = std::pow(-m.eigenvalues[i], Complex(-beta, 0.0));
    return m.eigvec * f.asDiagonal() * m.eigvec_inv;
}

long horizon_for(const OperatorHandle& op) {
    return op.is_diagonal() ? kDiagonalHorizon : kMatrixHorizon;
}

} // namespace

std::vector<Complex> cayley_multipliers(const OperatorHandle& op) {
    std::vector<Complex> c;
    for (const Complex& mu : op.eigenvalues()) c.push_back((1.0 + mu) / (1.0 - mu));
    return c;
}

Matrix cayley_matrix(const MatrixOperator& op) {
    const Matrix id = Matrix::Identity(op.dim(), op.dim());
    // (I+A)(I-A)^{-1} = (I-A)^{-1}(I+A); the factors commute
    return (id - op.entries).partialPivLu().solve(id + op.entries);
}

Matrix matrix_power(const Matrix& b, long n) {
    if (n < 0) throw DomainError("matrix_power: negative exponent");
    Matrix result = Matrix::Identity(b.rows(), b.cols());
    Matrix base = b;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

SupResult cayley_power_weighted_sup(const DiagonalOperator& op, long n, double beta) {
    if (n < 0 || n > kDiagonalHorizon)
        throw HorizonExceeded("cayley_power_weighted_sup: n outside horizon");
    const double nd = static_cast<double>(n);
    return sup_over_spectrum(op, [nd, beta](Complex mu) {
        const Complex l = -mu;  // sigma(-A), Re l > 0
        const double denom = std::norm(1.0 + l);
        const double ratio = 4.0 * l.real() / denom;  // in (0, 1]
        const double logc = ratio >= 1.0 ? -kInf : std::log1p(-ratio);
        const double base = nd == 0.0 ? 0.0 : 0.5 * nd * logc;
        return base - beta * std::log(std::abs(l));
    });
}

double cayley_power_weighted_norm(const OperatorHandle& op, long n, double beta) {
    if (n < 0 || n > horizon_for(op))
        throw HorizonExceeded("cayley_power_weighted_norm: n outside horizon");
    if (op.is_diagonal()) return cayley_power_weighted_sup(op.diagonal(), n, beta).value;
    const auto& m = op.matrix();
    Matrix p = matrix_power(cayley_matrix(m), n);
    if (beta != 0.0) p = p * frac_power_matrix(m, beta);
    return matrix_2norm(p);
}

PowerBound power_bounded_check(const OperatorHandle& op, long horizon) {
    if (horizon < 1 || horizon > horizon_for(op))
        throw HorizonExceeded("power_bounded_check: horizon outside guard");
    PowerBound pb;
    pb.horizon = horizon;
    if (op.is_diagonal()) {
        double cmax = 0.0;
        for (const Complex& c : cayley_multipliers(op)) cmax = std::max(cmax, std::abs(c));
        if (cmax > 1.0 + 1e-12)
            throw SpectrumViolation("power_bounded_check: multiplier above unit modulus");
        pb.bound = 1.0;
        pb.contraction = true;
        return pb;
    }
    const Matrix ad = cayley_matrix(op.matrix());
    Matrix p = Matrix::Identity(ad.rows(), ad.cols());
    double m = 1.0;
    for (long n = 1; n <= horizon; ++n) {
        p = ad * p;
        const double nrm = matrix_2norm(p);
        m = std::max(m, nrm);
        if (nrm < 1e-300) break;  // powers vanished; later norms cannot raise the max
    }
    pb.bound = m;
    pb.contraction = m <= 1.0 + 1e-12;
    return pb;
}

std::vector<std::pair<double, double>> cayley_decay_series(const OperatorHandle& op,
                                                           double beta,
                                                           const GridSpec& grid) {
    std::vector<std::pair<double, double>> series;
    for (long n : grid.integer_values())
        series.emplace_back(static_cast<double>(n),
                            cayley_power_weighted_norm(op, n, beta));
    return series;
}

DecayFit cayley_decay_fit(const OperatorHandle& op, double beta, const GridSpec& grid) {
    return loglog_fit_tail(cayley_decay_series(op, beta, grid));
}

LiminfSequence liminf_bound_check(const OperatorHandle& op, long m, long n_lo, long n_hi) {
    if (m < 1 || n_lo < 1 || n_hi < n_lo)
        throw DomainError("liminf_bound_check: need m >= 1 and 1 <= n_lo <= n_hi");
    LiminfSequence seq;
    seq.minimum = kInf;
    for (long n = n_lo; n <= n_hi; ++n) {
        const long power = m * n * n * n;
        const double v =
            static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n) *
            cayley_power_weighted_norm(op, power, 3.0);
        seq.entries.emplace_back(n, v);
        seq.minimum = std::min(seq.minimum, v);
    }
    return seq;
}

EnvelopeResult gn_envelope(const EnvelopeParams& params) {
    if (!(params.C2 > 0.0) || params.n < 1)
        throw DomainError("gn_envelope: need C2 > 0 and n >= 1");
    const double n = static_cast<double>(params.n);
    EnvelopeResult r;
    r.s_star = params.C2 * (n + 2.0) / 2.0;
    r.g_max = (2.0 * n / (params.C2 * (n + 2.0))) *
              std::exp(0.5 * n * std::log1p(-2.0 / (n + 2.0)));
    return r;
}

EnvelopeCheck dr_ct_envelope_check(const OperatorHandle& op, double alpha,
                                   const GridSpec& grid) {
    EnvelopeCheck c;
    double sup_log_prev = 0.0, sup_nolog_prev = 0.0;
    const auto ns = grid.integer_values();
    const double decade_cut =
        static_cast<double>(ns.back()) / 10.0;  // start of the last decade
    for (long n : ns) {
        const double w = cayley_power_weighted_norm(op, n, alpha + 2.0);
        c.series.emplace_back(n, w);
        const double nd = static_cast<double>(n);
        const double logn = std::max(std::log(nd), 1.0);
        c.sup_with_log = std::max(c.sup_with_log, nd / logn * w);
        c.sup_without_log = std::max(c.sup_without_log, nd * w);
        if (nd <= decade_cut) {
            sup_log_prev = c.sup_with_log;
            sup_nolog_prev = c.sup_without_log;
        }
    }
    auto stabilized = [](double before, double after) {
        return after <= 0.0 ? true : (after - before) <= 0.01 * after;
    };
    c.stabilized_with_log = stabilized(sup_log_prev, c.sup_with_log);
    c.stabilized_without_log = stabilized(sup_nolog_prev, c.sup_without_log);
    return c;
}

BoundCheck guo_zwart_inequality_check(const MatrixOperator& op, const Vector& x,
                                      const Vector& y, double r, long n,
                                      const LyapunovSolution& q, double power_bound) {
    if (!(r > 0.0) || !(r < 1.0))
        throw DomainError("guo_zwart_inequality_check: r must lie in (0,1)");
    if (n < 0 || n > kMatrixHorizon)
        throw HorizonExceeded("guo_zwart_inequality_check: n outside horizon");
    const double xi = (1.0 - r * r) / (2.0 * (1.0 + r * r));
    if (std::fabs(q.xi - xi) > 1e-12)
        throw MismatchedXi("guo_zwart_inequality_check: Q solved at a different xi");

    const Matrix id = Matrix::Identity(op.dim(), op.dim());
    const Vector resx = (id - op.entries).partialPivLu().solve(x);
    const Vector adn_resx = matrix_power(cayley_matrix(op), n) * resx;
    const double rn = std::pow(r, static_cast<double>(n));

    BoundCheck c;
    c.lhs = static_cast<double>(n + 1) * std::abs(y.dot(rn * adn_resx));
    c.rhs = power_bound * y.norm() *
            std::sqrt(std::max(q.quadratic_form(x), 0.0) / (1.0 - r * r * r * r));
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-8);
    return c;
}

BoundCheck guo_zwart_inequality_check(const MatrixOperator& op, const Vector& x,
                                      const Vector& y, double r, long n,
                                      const LyapunovSolution& q) {
    const long horizon = std::min<long>(std::max<long>(2 * n, 1000), kMatrixHorizon);
    const double m = power_bounded_check(OperatorHandle(op), horizon).bound;
    return guo_zwart_inequality_check(op, x, y, r, n, q, m);
}

} // namespace polystab
