#include "polystab/perturbation.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "polystab/lyapunov.hpp"
#include "polystab/semigroup.hpp"

namespace polystab {

PerturbedOperator perturb(const OperatorHandle& op, double r) {
    if (!(r >= 0.0)) throw DomainError("perturb: r must be >= 0");
    if (r == 0.0) return {op, 0.0, op};

    if (op.is_diagonal()) {
        SpectrumModel spec = op.diagonal().spectrum;
        if (spec.kind == SpectrumKind::NamedFormula && spec.perturbation_r == 0.0) {
            spec.perturbation_r = r;  // keeps the spectrum refinable
        } else {
            std::vector<Complex> pts;
            for (const Complex& mu : op.diagonal().eigenvalues()) pts.push_back(mu + r / mu);
            spec = SpectrumModel::explicit_list(std::move(pts));
        }
        return {op, r, OperatorHandle(build_diagonal(spec))};
    }

    const auto& m = op.matrix();
    const Matrix inv = m.entries.partialPivLu().inverse();
    return {op, r, OperatorHandle(build_matrix(m.entries + r * inv))};
}

FactorizationCheck resolvent_factorization_check(const OperatorHandle& op, double omega,
                                                 const Vector& x) {
    const PerturbedOperator p = perturb(op, 1.0);
    FactorizationCheck c;
    c.lhs = apply_resolvent(p.perturbed, Complex(0.0, omega), x);

    const double root = std::sqrt(1.0 + omega * omega / 4.0);
    const Complex w1(0.0, omega / 2.0 + root);
    const Complex w2(0.0, omega / 2.0 - root);
    Vector u = apply_resolvent(op, w2, x);
    u = apply_resolvent(op, w1, u);
    c.rhs = -apply_operator(op, u);

    const double scale = c.lhs.norm();
    c.rel_err = (c.lhs - c.rhs).norm() / (scale > 0.0 ? scale : 1.0);
    return c;
}

PerturbedLyapunovCheck perturbed_lyapunov_check(const MatrixOperator& op, double xi,
                                                double kappa) {
    if (!(xi > 0.0)) throw DomainError("perturbed_lyapunov_check: xi must be positive");
    PerturbedLyapunovCheck c;

    Eigen::JacobiSVD<Matrix> svd(op.entries.partialPivLu().inverse());
    const double inv_norm = svd.singularValues()(0);
    c.kappa_floor = inv_norm * inv_norm;
    c.kappa_ok = kappa > c.kappa_floor;

    const LyapunovSolution q1 = lyapunov_solve_direct(op, xi / (1.0 + kappa));
    const Matrix inv = op.entries.partialPivLu().inverse();
    Matrix shifted = op.entries + inv;
    shifted.diagonal().array() -= xi;

    const Matrix s =
        -(shifted.adjoint() * q1.q + q1.q * shifted) - Matrix::Identity(op.dim(), op.dim());
    const Matrix herm = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    c.min_eigenvalue = es.eigenvalues()(0);
    c.holds = c.min_eigenvalue >= -1e-8;
    return c;
}

RateReport perturbed_rate_report(const OperatorHandle& op, double alpha, double r,
                                 const GridSpec& grid, double epsilon) {
    const PerturbedOperator p = perturb(op, r);

    RateReport rep;
    rep.experiment_id = "perturbed-rate";
    rep.claim = "structured perturbation A + r/A keeps the weighted semigroup decay rate";
    rep.operator_hash = operator_hash(op);
    rep.fitted = semigroup_decay_fit(p.perturbed, alpha, grid);

    if (alpha > 2.0) {
        rep.guarantee = {-1.0, false};
    } else if (alpha == 2.0) {
        rep.guarantee = {-1.0, true};
    } else {
        rep.guarantee = {-(1.0 - epsilon), false};
    }

    if (rep.fitted.r_squared < 0.99) {
        rep.verdict = Verdict::Inconclusive;
        rep.notes = "fit r-squared below 0.99; not a clean power law";
    } else if (rep.fitted.exponent <= rep.guarantee.exponent + 0.05) {
        rep.verdict = Verdict::Pass;
    } else {
        rep.verdict = Verdict::Fail;
    }
    return rep;
}

} // namespace polystab
