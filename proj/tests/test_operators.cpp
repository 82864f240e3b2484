#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "polystab/operators.hpp"
#include "polystab/random.hpp"

using namespace polystab;

namespace {
OperatorHandle example_op(std::size_t n) {
    return OperatorHandle(build_diagonal(SpectrumModel::named("paper-example", n)));
}
}

TEST_CASE("named spectrum formula generates -1/k + ik") {
    auto op = example_op(10);
    CHECK(op.diagonal().eigenvalue(1) == Complex(-1.0, 1.0));
    CHECK(op.diagonal().eigenvalue(3).real() == doctest::Approx(-1.0 / 3.0));
    CHECK(op.diagonal().eigenvalue(3).imag() == 3.0);
    CHECK(op.dimension() == 10);
}

TEST_CASE("power formula generates -k^-p + i k^q") {
    auto op = OperatorHandle(build_diagonal(SpectrumModel::named("power", 8, 0.5, 2.0)));
    CHECK(op.diagonal().eigenvalue(4).real() == doctest::Approx(-0.5));
    CHECK(op.diagonal().eigenvalue(4).imag() == doctest::Approx(16.0));
    CHECK_THROWS_AS(SpectrumModel::named("mystery", 8), SpectrumViolation);
}

TEST_CASE("spectrum validation rejects unstable or degenerate eigenvalues") {
    CHECK_THROWS_AS(build_diagonal(SpectrumModel::explicit_list({{0.5, 1.0}})),
                    SpectrumViolation);
    CHECK_THROWS_AS(build_diagonal(SpectrumModel::explicit_list({{0.0, 1.0}})),
                    SpectrumViolation);
    CHECK_THROWS_AS(build_diagonal(SpectrumModel::explicit_list({{-1e-13, 0.0}})),
                    SpectrumViolation);
    CHECK_THROWS_AS(build_diagonal(SpectrumModel::explicit_list({})), SpectrumViolation);
}

TEST_CASE("fractional power weights use the principal branch") {
    auto op = OperatorHandle(build_diagonal(SpectrumModel::explicit_list({{-1.0, 1.0}})));
    // (-mu)^{-2} with mu = -1+i: (1-i)^{-2} = i/2
    auto w = frac_power_weights(op, 2.0);
    CHECK(w[0].real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w[0].imag() == doctest::Approx(0.5).epsilon(1e-14));
    // beta = 0 gives unit weights
    auto w0 = frac_power_weights(op, 0.0);
    CHECK(std::abs(w0[0] - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("diagonal resolvent is componentwise division") {
    auto op = OperatorHandle(build_diagonal(SpectrumModel::explicit_list({{-1.0, 0.0}})));
    Vector x(1);
    x[0] = 1.0;
    CHECK(std::abs(apply_resolvent(op, Complex(1.0, 0.0), x)[0] - Complex(0.5, 0.0)) <
          1e-15);
    CHECK_THROWS_AS(apply_resolvent(op, Complex(-1.0, 0.0), x), SpectrumHit);
    Vector wrong(2);
    CHECK_THROWS_AS(apply_resolvent(op, Complex(1.0, 0.0), wrong), DimensionMismatch);
}

TEST_CASE("resolvent identity holds on random operators") {
    Rng rng(7);
    auto op = example_op(12);
    const Vector x = random_vector(rng, 12);
    const Complex z1(0.3, 2.0), z2(1.1, -4.0);
    // R(z1) - R(z2) = (z2 - z1) R(z1) R(z2)
    const Vector lhs = apply_resolvent(op, z1, x) - apply_resolvent(op, z2, x);
    const Vector rhs = (z2 - z1) * apply_resolvent(op, z1, apply_resolvent(op, z2, x));
    CHECK((lhs - rhs).norm() / lhs.norm() < 1e-13);

    auto m = random_stable_matrix(rng, 6);
    OperatorHandle hm(m);
    const Vector y = random_vector(rng, 6);
    const Vector lm = apply_resolvent(hm, z1, y) - apply_resolvent(hm, z2, y);
    const Vector rm = (z2 - z1) * apply_resolvent(hm, z1, apply_resolvent(hm, z2, y));
    CHECK((lm - rm).norm() / lm.norm() < 1e-12);
}

TEST_CASE("apply_operator and apply_inverse invert each other") {
    Rng rng(8);
    auto op = example_op(9);
    const Vector x = random_vector(rng, 9);
    CHECK((apply_inverse(op, apply_operator(op, x)) - x).norm() < 1e-13 * x.norm());
    auto m = random_stable_matrix(rng, 5);
    OperatorHandle hm(m);
    const Vector y = random_vector(rng, 5);
    CHECK((apply_operator(hm, apply_inverse(hm, y)) - y).norm() < 1e-12 * y.norm());
}

TEST_CASE("matrix builder validates diagonalizability and stability") {
    Matrix good(2, 2);
    good << Complex(-1.0, 0.0), Complex(0.3, 0.1), Complex(0.0, 0.0), Complex(-2.0, 1.0);
    auto op = build_matrix(good);
    CHECK(op.dim() == 2);
    CHECK(op.reconstruction_residual < 1e-12);
    CHECK(op.eigvec_condition >= 1.0);

    Matrix unstable(2, 2);
    unstable << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(-1.0, 0.0);
    CHECK_THROWS_AS(build_matrix(unstable), NotStable);

    Matrix jordan(2, 2);  // defective: single eigenvalue -1 with one eigenvector
    jordan << Complex(-1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(-1.0, 0.0);
    CHECK_THROWS_AS(build_matrix(jordan), Error);

    Matrix empty(0, 0);
    CHECK_THROWS_AS(build_matrix(empty), NotStable);
}

TEST_CASE("operator JSON round trip preserves the operator and its hash") {
    auto op = example_op(16);
    auto j = operator_to_json(op);
    auto back = operator_from_json(j);
    CHECK(operator_hash(op) == operator_hash(back));
    CHECK(back.dimension() == 16);

    auto other = example_op(17);
    CHECK(operator_hash(op) != operator_hash(other));

    Rng rng(11);
    auto m = random_stable_matrix(rng, 4);
    OperatorHandle hm(m);
    auto back_m = operator_from_json(operator_to_json(hm));
    CHECK(operator_hash(hm) == operator_hash(back_m));
    CHECK((back_m.matrix().entries - m.entries).norm() < 1e-15);
}

TEST_CASE("operator JSON rejects malformed descriptions") {
    CHECK_THROWS_AS(operator_from_json(nlohmann::json{{"type", "banana"}}), ConfigError);
    CHECK_THROWS_AS(operator_from_json(nlohmann::json{{"type", "diagonal"}}), ConfigError);
    CHECK_THROWS_AS(operator_from_json(nlohmann::json::array()), ConfigError);
    nlohmann::json no_trunc = {{"type", "diagonal"}, {"formula", "paper-example"}};
    CHECK_THROWS_AS(operator_from_json(no_trunc), ConfigError);
}

TEST_CASE("geometric spectral profile of the explicit example is alpha = 1") {
    auto op = example_op(200);
    auto g = geometric_alpha(op, 0.5);  // eigenvalues of -A with Re <= 0.5, i.e. k >= 2
    CHECK(g.alpha == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.constant == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.points_used >= 100);

    auto tiny = example_op(3);
    CHECK_THROWS_AS(geometric_alpha(tiny, 0.01), InsufficientPoints);
}

TEST_CASE("sup over a refinable spectrum converges with an interior maximizer") {
    auto op = build_diagonal(SpectrumModel::named("paper-example", 64));
    // log term e^{t Re mu} |mu|^{-1} at t = 500: maximizer near k = 500
    auto sup = sup_over_spectrum(op, [](Complex mu) {
        return 500.0 * mu.real() - std::log(std::abs(mu));
    });
    CHECK(sup.argmax == 500);
    CHECK(sup.interior);
    CHECK(sup.truncation >= 5000);
    CHECK(sup.value == doctest::Approx(std::exp(-1.0) / 500.0).epsilon(1e-4));
}

TEST_CASE("explicit-list spectra are never refined") {
    auto pts = SpectrumModel::explicit_list({{-1.0, 1.0}, {-0.5, 2.0}, {-2.0, -1.0}});
    auto op = build_diagonal(pts);
    auto sup = sup_over_spectrum(op, [](Complex mu) { return mu.real(); });
    CHECK(sup.truncation == 3);
    CHECK(sup.argmax == 2);
    CHECK(sup.value == doctest::Approx(std::exp(-0.5)));
}
