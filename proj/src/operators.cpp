#include "polystab/operators.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "polystab/quadfit.hpp"

namespace polystab {

SpectrumModel SpectrumModel::explicit_list(std::vector<Complex> pts) {
    SpectrumModel s;
    s.kind = SpectrumKind::ExplicitList;
    s.truncation = pts.size();
    s.points = std::move(pts);
    return s;
}

SpectrumModel SpectrumModel::named(const std::string& formula_id, std::size_t truncation,
                                   double p, double q) {
    SpectrumModel s;
    s.kind = SpectrumKind::NamedFormula;
    s.truncation = truncation;
    if (formula_id == "paper-example") {
        s.formula = formula_id;
        s.p = 1.0;
        s.q = 1.0;
    } else if (formula_id == "power") {
        s.formula = formula_id;
        s.p = p;
        s.q = q;
    } else {
        throw SpectrumViolation("unknown spectrum formula: " + formula_id);
    }
    return s;
}

Complex SpectrumModel::eigenvalue(std::size_t k) const {
    if (k < 1 || k > truncation)
        throw DomainError("SpectrumModel: eigenvalue index out of range");
    Complex mu;
    if (kind == SpectrumKind::ExplicitList) {
        mu = points[k - 1];
    } else {
        const double kd = static_cast<double>(k);
        if (p == 1.0 && q == 1.0)
            mu = Complex(-1.0 / kd, kd);
        else
            mu = Complex(-std::pow(kd, -p), std::pow(kd, q));
    }
    if (perturbation_r != 0.0) mu += perturbation_r / mu;
    return mu;
}

std::vector<Complex> DiagonalOperator::eigenvalues() const {
    std::vector<Complex> v(truncation());
    for (std::size_t k = 1; k <= truncation(); ++k) v[k - 1] = eigenvalue(k);
    return v;
}

std::size_t OperatorHandle::dimension() const {
    return is_diagonal() ? diagonal().truncation()
                         : static_cast<std::size_t>(matrix().dim());
}

std::vector<Complex> OperatorHandle::eigenvalues() const {
    if (is_diagonal()) return diagonal().eigenvalues();
    const auto& ev = matrix().eigenvalues;
    return {ev.data(), ev.data() + ev.size()};
}

DiagonalOperator build_diagonal(const SpectrumModel& spec) {
    if (spec.truncation < 1)
        throw SpectrumViolation("build_diagonal: truncation must be >= 1");
    if (spec.kind == SpectrumKind::ExplicitList && spec.points.size() != spec.truncation)
        throw SpectrumViolation("build_diagonal: truncation does not match point count");
    DiagonalOperator op{spec};
    for (std::size_t k = 1; k <= spec.truncation; ++k) {
        const Complex mu = op.eigenvalue(k);
        if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag()))
            throw SpectrumViolation("build_diagonal: nonfinite eigenvalue");
        if (mu.real() >= 0.0)
            throw SpectrumViolation("build_diagonal: eigenvalue with Re >= 0");
        if (std::abs(mu) < kSpectrumFloor)
            throw SpectrumViolation("build_diagonal: eigenvalue below modulus floor");
    }
    return op;
}

MatrixOperator build_matrix(const Matrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw NotStable("build_matrix: entries must form a nonempty square matrix");

    MatrixOperator op;
    op.entries = entries;
    Eigen::ComplexEigenSolver<Matrix> es(entries);
    if (es.info() != Eigen::Success)
        throw NotDiagonalizable("build_matrix: eigendecomposition failed");
    op.eigenvalues = es.eigenvalues();
    op.eigvec = es.eigenvectors();

    for (Eigen::Index i = 0; i < op.eigenvalues.size(); ++i) {
        if (op.eigenvalues[i].real() >= 0.0)
            throw NotStable("build_matrix: eigenvalue with Re >= 0");
        if (std::abs(op.eigenvalues[i]) < kSpectrumFloor)
            throw NotStable("build_matrix: eigenvalue below modulus floor");
    }

    Eigen::JacobiSVD<Matrix> svd(op.eigvec);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0)
        throw NotDiagonalizable("build_matrix: singular eigenvector matrix");
    op.eigvec_condition = sv(0) / sv(sv.size() - 1);
    if (op.eigvec_condition > kEigCondCeiling)
        throw IllConditionedEigenbasis("build_matrix: eigenvector condition exceeds ceiling");

    op.eigvec_inv = op.eigvec.partialPivLu().inverse();
    const Matrix recon = op.eigvec * op.eigenvalues.asDiagonal() * op.eigvec_inv;
    const double scale = entries.norm();
    op.reconstruction_residual = (recon - entries).norm() / (scale > 0.0 ? scale : 1.0);
    if (op.reconstruction_residual > kDiagonalizableTol)
        throw NotDiagonalizable("build_matrix: reconstruction residual above tolerance");
    return op;
}

OperatorHandle operator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("operator JSON: missing \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "diagonal") {
        if (j.contains("formula")) {
            if (!j.contains("truncation"))
                throw ConfigError("operator JSON: diagonal formula needs \"truncation\"");
            auto spec = SpectrumModel::named(j.at("formula").get<std::string>(),
                                            j.at("truncation").get<std::size_t>(),
                                            j.value("p", 1.0), j.value("q", 1.0));
            spec.perturbation_r = j.value("r", 0.0);
            return build_diagonal(spec);
        }
        if (j.contains("eigenvalues")) {
            std::vector<Complex> pts;
            for (const auto& e : j.at("eigenvalues")) {
                if (!e.is_array() || e.size() != 2)
                    throw ConfigError("operator JSON: eigenvalue entries must be [re, im]");
                pts.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
            return build_diagonal(SpectrumModel::explicit_list(std::move(pts)));
        }
        throw ConfigError("operator JSON: diagonal needs \"formula\" or \"eigenvalues\"");
    }
    if (type == "matrix") {
        if (!j.contains("entries"))
            throw ConfigError("operator JSON: matrix needs \"entries\"");
        const auto& rows = j.at("entries");
        const auto n = static_cast<Eigen::Index>(rows.size());
        Matrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != n)
                throw ConfigError("operator JSON: matrix entries must be square");
            for (Eigen::Index k = 0; k < n; ++k) {
                const auto& e = rows[i][k];
                if (!e.is_array() || e.size() != 2)
                    throw ConfigError("operator JSON: matrix entries must be [re, im]");
                m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
            }
        }
        return build_matrix(m);
    }
    throw ConfigError("operator JSON: unknown type \"" + type + "\"");
}

nlohmann::json operator_to_json(const OperatorHandle& op) {
    nlohmann::json j;
    if (op.is_diagonal()) {
        j["type"] = "diagonal";
        const auto& s = op.diagonal().spectrum;
        if (s.kind == SpectrumKind::NamedFormula) {
            j["formula"] = s.formula;
            j["truncation"] = s.truncation;
            if (s.formula == "power") {
                j["p"] = s.p;
                j["q"] = s.q;
            }
            if (s.perturbation_r != 0.0) j["r"] = s.perturbation_r;
        } else {
            auto arr = nlohmann::json::array();
            for (const auto& mu : s.points) arr.push_back({mu.real(), mu.imag()});
            j["eigenvalues"] = std::move(arr);
        }
    } else {
        j["type"] = "matrix";
        const auto& m = op.matrix().entries;
        auto rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            auto row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < m.cols(); ++k)
                row.push_back({m(i, k).real(), m(i, k).imag()});
            rows.push_back(std::move(row));
        }
        j["entries"] = std::move(rows);
    }
    return j;
}

std::uint64_t operator_hash(const OperatorHandle& op) {
    const std::string s = operator_to_json(op).dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<Complex> frac_power_weights(const OperatorHandle& op, double beta) {
    std::vector<Complex> w;
    for (const Complex& mu : op.eigenvalues())
        w.push_back(std::pow(-mu, Complex(-beta, 0.0)));
    return w;
}

Vector apply_resolvent(const OperatorHandle& op, Complex z, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("apply_resolvent: vector length mismatch");
    for (const Complex& mu : op.eigenvalues())
        if (std::abs(z - mu) < kSpectrumFloor)
            throw SpectrumHit("apply_resolvent: z within floor distance of spectrum");
    if (op.is_diagonal()) {
        const auto& d = op.diagonal();
        Vector y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            y[i] = x[i] / (z - d.eigenvalue(static_cast<std::size_t>(i) + 1));
        return y;
    }
    const auto& m = op.matrix();
    Matrix zma = -m.entries;
    zma.diagonal().array() += z;
    return zma.partialPivLu().solve(x);
}

Vector apply_operator(const OperatorHandle& op, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("apply_operator: vector length mismatch");
    if (op.is_diagonal()) {
        const auto& d = op.diagonal();
        Vector y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            y[i] = x[i] * d.eigenvalue(static_cast<std::size_t>(i) + 1);
        return y;
    }
    return op.matrix().entries * x;
}

Vector apply_inverse(const OperatorHandle& op, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != op.dimension())
        throw DimensionMismatch("apply_inverse: vector length mismatch");
    if (op.is_diagonal()) {
        const auto& d = op.diagonal();
        Vector y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            y[i] = x[i] / d.eigenvalue(static_cast<std::size_t>(i) + 1);
        return y;
    }
    return op.matrix().entries.partialPivLu().solve(x);
}

GeometricAlpha geometric_alpha(const OperatorHandle& op, double window) {
    std::vector<std::pair<double, double>> pts;  // (-log Re l, log |Im l|), l in sigma(-A)
    std::vector<Complex> lam;
    for (const Complex& mu : op.eigenvalues()) {
        const Complex l = -mu;  // Re l > 0
        if (l.real() <= window && std::fabs(l.imag()) > 0.0) {
            pts.emplace_back(-std::log(l.real()), std::log(std::fabs(l.imag())));
            lam.push_back(l);
        }
    }
    if (pts.size() < 3)
        throw InsufficientPoints("geometric_alpha: fewer than 3 spectrum points in window");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double den = n * sxx - sx * sx;
    if (std::fabs(den) < 1e-14 * n * sxx)
        throw InsufficientPoints("geometric_alpha: degenerate spectrum abscissae");
    const double slope = (n * sxy - sx * sy) / den;  // = 1/alpha
    if (!(slope > 0.0))
        throw InsufficientPoints("geometric_alpha: nonpositive slope, no polynomial profile");

    GeometricAlpha g;
    g.alpha = 1.0 / slope;
    g.points_used = pts.size();
    double cmin = kInf;
    for (const Complex& l : lam)
        cmin = std::min(cmin, std::fabs(l.imag()) * std::pow(l.real(), 1.0 / g.alpha));
    g.constant = cmin;
    return g;
}

} // namespace polystab
