#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "polystab/lyapunov.hpp"
#include "polystab/random.hpp"

using namespace polystab;

namespace {
OperatorHandle example_op(std::size_t n) {
    return OperatorHandle(build_diagonal(SpectrumModel::named("paper-example", n)));
}
}

TEST_CASE("scalar Lyapunov solution has the closed form 1/(2(xi - Re mu))") {
    Matrix a(1, 1);
    a(0, 0) = Complex(-1.0, 0.0);
    auto m = build_matrix(a);
    auto q = lyapunov_solve_direct(m, 0.5);
    CHECK(q.q(0, 0).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(q.q(0, 0).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(q.residual < 1e-12);
    CHECK(q.xi == 0.5);
    CHECK_THROWS_AS(lyapunov_solve_direct(m, 0.0), DomainError);
}

TEST_CASE("diagonal closed form matches the per-mode formula") {
    auto op = example_op(6);
    auto q = lyapunov_solve(op, 0.25);
    CHECK(q.method == LyapunovMethod::ClosedForm);
    for (int k = 1; k <= 6; ++k)
        CHECK(q.q(k - 1, k - 1).real() ==
              doctest::Approx(1.0 / (2.0 * (0.25 + 1.0 / k))).epsilon(1e-14));
    Vector x = Vector::Zero(6);
    x[2] = 2.0;  // mode k = 3
    CHECK(q.quadratic_form(x) ==
          doctest::Approx(4.0 / (2.0 * (0.25 + 1.0 / 3.0))).epsilon(1e-13));
}

TEST_CASE("direct and integral routes agree on random matrices") {
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        auto m = random_stable_matrix(rng, 5 + trial);
        const double xi = 0.1 + 0.2 * trial;
        auto direct = lyapunov_solve_direct(m, xi);
        auto integral = lyapunov_integral(OperatorHandle(m), xi, 1e-11);
        CHECK(direct.residual < 1e-10);
        CHECK(integral.residual < 1e-8);
        CHECK((direct.q - integral.q).norm() / direct.q.norm() < 1e-8);
        // hermitian PSD by construction (validate_solution throws otherwise)
        Eigen::SelfAdjointEigenSolver<Matrix> es(direct.q);
        CHECK(es.eigenvalues()(0) > 0.0);
    }
}

TEST_CASE("resolvent energy integral of a scalar mode is a Poisson integral") {
    // (1/2pi) int d eta / ((xi+1)^2 + (eta-1)^2) = 1/(2(xi+1)) for mu = -1 + i
    auto op = OperatorHandle(build_diagonal(SpectrumModel::explicit_list({{-1.0, 1.0}})));
    Vector x(1);
    x[0] = 1.0;
    const double got = resolvent_energy_integral(op, 0.5, x, 1e-10);
    CHECK(got == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("quadratic form equals the resolvent energy integral") {
    Rng rng(43);
    auto op = example_op(30);
    for (double xi : {0.5, 0.1}) {
        const Vector x = random_vector(rng, 30);
        auto c = plancherel_check(op, xi, x);
        CHECK(c.rel_err < 1e-6);
    }
    auto m = random_stable_matrix(rng, 6);
    auto cm = plancherel_check(OperatorHandle(m), 0.3, random_vector(rng, 6));
    CHECK(cm.rel_err < 1e-6);

    Vector zero = Vector::Zero(30);
    CHECK_THROWS_AS(plancherel_check(op, 0.5, zero), DomainError);
}

TEST_CASE("limit scan vanishes below the critical weight but not at it") {
    Rng rng(47);
    auto op = example_op(200);
    const Vector x = random_vector(rng, 200);
    GridSpec grid(1e-6, 1e-1, 26);

    auto below = lyapunov_limit_scan(op, 1.0, 0.25, x, grid);
    CHECK(below.vanishing);
    CHECK(below.entries.front().first == doctest::Approx(0.1));
    CHECK(below.entries.back().first == doctest::Approx(1e-6));
    CHECK(below.entries.front().second > 10.0 * below.entries.back().second);

    // at gamma = 1/2 the normalization is logarithmic in xi and the scan
    // cannot drop an order of magnitude over four decades
    auto critical = lyapunov_limit_scan(op, 1.0, 0.5, x, grid);
    CHECK_FALSE(critical.vanishing);
    CHECK(critical.entries.front().second < 10.0 * critical.entries.back().second);

    CHECK_THROWS_AS(lyapunov_limit_scan(op, 1.0, 0.7, x, grid), DomainError);
    CHECK_THROWS_AS(lyapunov_limit_scan(op, 1.0, 0.25, x, GridSpec(1e-9, 0.1, 10)),
                    DomainError);
}

TEST_CASE("trajectory bound holds for diagonal and matrix operators") {
    Rng rng(53);
    auto op = example_op(20);
    const Vector x = random_vector(rng, 20);
    for (double t : {1.0, 10.0}) {
        auto c = trajectory_bound_check(op, x, 0.2, t);
        CHECK(c.holds);
        CHECK(c.lhs <= x.norm());
    }
    auto m = random_stable_matrix(rng, 5);
    auto cm = trajectory_bound_check(OperatorHandle(m), random_vector(rng, 5), 0.3, 2.0);
    CHECK(cm.holds);
    CHECK_THROWS_AS(trajectory_bound_check(op, x, -0.1, 1.0), DomainError);
}
