#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "polystab/errors.hpp"

#include "json.hpp"

namespace polystab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

constexpr double kSpectrumFloor = 1e-12;       // min |mu| and min distance to spectrum
constexpr double kEigCondCeiling = 1e8;        // eigenvector-basis condition ceiling
constexpr double kDiagonalizableTol = 1e-10;   // relative reconstruction residual

enum class SpectrumKind { ExplicitList, NamedFormula };

// Spectrum of a diagonal generator.  Named formulas generate
//   mu_k = -k^{-p} + i k^{q},  k = 1..N,
// optionally shifted by the structured perturbation mu -> mu + r/mu.
// "paper-example" is the formula with p = q = 1.
struct SpectrumModel {
    SpectrumKind kind = SpectrumKind::ExplicitList;
    std::vector<Complex> points;  // explicit list
    std::string formula;          // "paper-example" or "power"
    double p = 1.0;
    double q = 1.0;
    double perturbation_r = 0.0;
    std::size_t truncation = 0;

    static SpectrumModel explicit_list(std::vector<Complex> pts);
    static SpectrumModel named(const std::string& formula_id, std::size_t truncation,
                               double p = 1.0, double q = 1.0);

    Complex eigenvalue(std::size_t k) const;  // 1-based
    bool refinable() const { return kind == SpectrumKind::NamedFormula; }
};

struct DiagonalOperator {
    SpectrumModel spectrum;

    std::size_t truncation() const { return spectrum.truncation; }
    Complex eigenvalue(std::size_t k) const { return spectrum.eigenvalue(k); }
    std::vector<Complex> eigenvalues() const;
};

struct MatrixOperator {
    Matrix entries;
    Vector eigenvalues;
    Matrix eigvec;      // V
    Matrix eigvec_inv;  // V^{-1}
    double eigvec_condition = 1.0;
    double reconstruction_residual = 0.0;

    Eigen::Index dim() const { return entries.rows(); }
};

struct OperatorHandle {
    std::variant<DiagonalOperator, MatrixOperator> op;

    OperatorHandle(DiagonalOperator d) : op(std::move(d)) {}
    OperatorHandle(MatrixOperator m) : op(std::move(m)) {}

    bool is_diagonal() const { return std::holds_alternative<DiagonalOperator>(op); }
    const DiagonalOperator& diagonal() const { return std::get<DiagonalOperator>(op); }
    const MatrixOperator& matrix() const { return std::get<MatrixOperator>(op); }

    // truncation for diagonal, dim for matrix
    std::size_t dimension() const;
    std::vector<Complex> eigenvalues() const;
};

DiagonalOperator build_diagonal(const SpectrumModel& spec);
MatrixOperator build_matrix(const Matrix& entries);

// Operator description from JSON:
//   {"type":"diagonal","formula":"paper-example","truncation":N}
//   {"type":"diagonal","formula":"power","p":..,"q":..,"truncation":N}
//   {"type":"diagonal","eigenvalues":[[re,im],...]}
//   {"type":"matrix","entries":[[[re,im],...],...]}
OperatorHandle operator_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const OperatorHandle& op);
std::uint64_t operator_hash(const OperatorHandle& op);

// Per-eigenvalue weights (-mu_k)^{-beta}, principal branch.
std::vector<Complex> frac_power_weights(const OperatorHandle& op, double beta);

// (z - A)^{-1} x
Vector apply_resolvent(const OperatorHandle& op, Complex z, const Vector& x);

// A x (diagonal: componentwise; matrix: product)
Vector apply_operator(const OperatorHandle& op, const Vector& x);

// A^{-1} x
Vector apply_inverse(const OperatorHandle& op, const Vector& x);

struct GeometricAlpha {
    double alpha = 0.0;
    double constant = 0.0;  // largest C with |Im l| >= C (Re l)^{-1/alpha} on the points
    std::size_t points_used = 0;
};

// Fit of the geometric spectral criterion on sigma(-A) near the imaginary
// axis: points with Re lambda <= window.
GeometricAlpha geometric_alpha(const OperatorHandle& op, double window);

// --- shared sup-over-spectrum machinery -------------------------------------

struct SupResult {
    double log_value = -1.0e308;  // natural log of the sup
    double value = 0.0;
    std::size_t argmax = 0;      // 1-based eigenvalue index
    std::size_t truncation = 0;  // truncation actually used
    bool interior = true;        // maximizer well inside the truncation
};

// Maximize log_term(mu_k) over the spectrum.  Named-formula spectra are
// auto-refined: N doubles until the sup changes by < 1e-6 (log scale) and the
// maximizer sits in the first tenth of the truncation.
template <typename LogTerm>
SupResult sup_over_spectrum(const DiagonalOperator& op, LogTerm&& log_term) {
    const bool refine = op.spectrum.refinable();
    std::size_t n = refine ? std::max<std::size_t>(op.truncation(), 64) : op.truncation();
    constexpr std::size_t kCap = std::size_t(1) << 23;
    SpectrumModel spec = op.spectrum;  // local copy so refinement can widen it

    double prev_log = 0.0;
    bool have_prev = false;
    for (;;) {
        spec.truncation = n;
        double best = -1e308;
        std::size_t arg = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double v = log_term(spec.eigenvalue(k));
            if (v > best) {
                best = v;
                arg = k;
            }
        }
        SupResult r;
        r.log_value = best;
        r.value = best <= -700.0 ? 0.0 : std::exp(best);
        r.argmax = arg;
        r.truncation = n;
        r.interior = refine ? (arg * 10 <= n) : (arg < n);
        if (!refine) return r;

        const bool converged = have_prev && std::fabs(best - prev_log) < 1e-6;
        if (converged && (r.interior || arg == n)) return r;
        prev_log = best;
        have_prev = true;
        if (n >= kCap) {
            if (converged) return r;  // boundary-accumulating sup; flagged not interior
            throw NoConvergence("sup_over_spectrum: truncation refinement did not converge");
        }
        n *= 2;
    }
}

} // namespace polystab
