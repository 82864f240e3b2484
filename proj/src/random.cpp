#include "polystab/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace polystab {

Vector random_vector(Rng& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
    return v;
}

namespace {

Matrix random_unitary(Rng& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ() * Matrix::Identity(n, n);
}

} // namespace

MatrixOperator random_stable_matrix(Rng& rng, Eigen::Index n, double condition) {
    std::uniform_real_distribution<double> re(-2.0, -0.2);
    std::uniform_real_distribution<double> im(-3.0, 3.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = Complex(re(rng), im(rng));

    // similarity with singular values log-spaced in [1, condition]
    const Matrix q1 = random_unitary(rng, n);
    const Matrix q2 = random_unitary(rng, n);
    Vector s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s[i] = std::pow(condition, n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
    const Matrix v = q1 * s.asDiagonal() * q2;

    const Matrix a = v * d.asDiagonal() * v.partialPivLu().inverse();
    return build_matrix(a);
}

} // namespace polystab
