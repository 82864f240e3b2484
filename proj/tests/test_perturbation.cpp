#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "polystab/perturbation.hpp"
#include "polystab/random.hpp"

using namespace polystab;

namespace {
OperatorHandle example_op(std::size_t n = 64) {
    return OperatorHandle(build_diagonal(SpectrumModel::named("paper-example", n)));
}
}

TEST_CASE("perturbation maps each eigenvalue to mu + r/mu") {
    auto op = OperatorHandle(build_diagonal(SpectrumModel::explicit_list({{-1.0, 1.0}})));
    auto p = perturb(op, 1.0);
    // -1+i + 1/(-1+i) = -3/2 + i/2
    const Complex got = p.perturbed.eigenvalues()[0];
    CHECK(got.real() == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(got.imag() == doctest::Approx(0.5).epsilon(1e-14));

    auto same = perturb(op, 0.0);
    CHECK(same.perturbed.eigenvalues()[0] == Complex(-1.0, 1.0));
    CHECK_THROWS_AS(perturb(op, -0.5), DomainError);
}

TEST_CASE("perturbed formula spectra stay refinable") {
    auto p = perturb(example_op(), 1.0);
    REQUIRE(p.perturbed.is_diagonal());
    CHECK(p.perturbed.diagonal().spectrum.refinable());
    CHECK(p.perturbed.diagonal().spectrum.perturbation_r == 1.0);
    // mode k: (-1/k + ik) + 1/(-1/k + ik)
    const Complex mu(-0.5, 2.0);  // k = 2
    const Complex expected = mu + 1.0 / mu;
    const Complex got = p.perturbed.diagonal().eigenvalue(2);
    CHECK(std::abs(got - expected) < 1e-14);
}

TEST_CASE("matrix perturbation adds r times the inverse") {
    Rng rng(61);
    auto m = random_stable_matrix(rng, 4);
    auto p = perturb(OperatorHandle(m), 0.5);
    const Matrix expected = m.entries + 0.5 * m.entries.partialPivLu().inverse();
    CHECK((p.perturbed.matrix().entries - expected).norm() < 1e-13 * expected.norm());
}

TEST_CASE("scalar resolvent factorization at omega = 0") {
    auto op = OperatorHandle(build_diagonal(SpectrumModel::explicit_list({{-1.0, 0.0}})));
    Vector x(1);
    x[0] = 1.0;
    auto c = resolvent_factorization_check(op, 0.0, x);
    // (0 - A - A^{-1})^{-1} x = (1 + 1)^{-1} x = x/2
    CHECK(std::abs(c.lhs[0] - Complex(0.5, 0.0)) < 1e-14);
    CHECK(c.rel_err < 1e-14);
}

TEST_CASE("resolvent factorization identity on random operators and frequencies") {
    Rng rng(67);
    std::uniform_real_distribution<double> om(-5.0, 5.0);
    auto diag = example_op(12);
    auto m = random_stable_matrix(rng, 6);
    OperatorHandle mat(m);
    for (int i = 0; i < 20; ++i) {
        const double w = om(rng);
        CHECK(resolvent_factorization_check(diag, w, random_vector(rng, 12)).rel_err < 1e-10);
        CHECK(resolvent_factorization_check(mat, w, random_vector(rng, 6)).rel_err < 1e-9);
    }
}

TEST_CASE("perturbed Lyapunov inequality: frozen scalar chain") {
    Matrix a(1, 1);
    a(0, 0) = Complex(-1.0, 0.0);
    auto m = build_matrix(a);
    auto c = perturbed_lyapunov_check(m, 0.5, 2.0);
    // Q1 = Q(xi/3) = 1/(2(1/6 + 1)) = 3/7; S = -2(-2.5)(3/7) - 1 = 8/7
    CHECK(c.min_eigenvalue == doctest::Approx(8.0 / 7.0).epsilon(1e-13));
    CHECK(c.holds);
    CHECK(c.kappa_floor == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.kappa_ok);

    auto weak = perturbed_lyapunov_check(m, 0.5, 0.5);
    CHECK_FALSE(weak.kappa_ok);
    CHECK_THROWS_AS(perturbed_lyapunov_check(m, -0.1, 2.0), DomainError);
}

TEST_CASE("perturbed Lyapunov inequality holds on random matrices") {
    Rng rng(71);
    for (int i = 0; i < 10; ++i) {
        auto m = random_stable_matrix(rng, 6);
        auto probe = perturbed_lyapunov_check(m, 0.2, 1.0);  // kappa possibly too small
        auto c = perturbed_lyapunov_check(m, 0.2, 1.5 * probe.kappa_floor);
        CHECK(c.kappa_ok);
        CHECK(c.holds);
    }
}

TEST_CASE("perturbed decay rate of the explicit example keeps its guarantee") {
    auto rep = perturbed_rate_report(example_op(), 1.0, 1.0, GridSpec(10.0, 1e3, 25));
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.fitted.exponent == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(rep.guarantee.exponent == doctest::Approx(-0.95));
    CHECK_FALSE(rep.guarantee.log_factor);

    auto rep3 = perturbed_rate_report(example_op(), 3.0, 1.0, GridSpec(10.0, 1e3, 25));
    CHECK(rep3.guarantee.exponent == doctest::Approx(-1.0));
}
