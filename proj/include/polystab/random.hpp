#pragma once

#include <random>

#include "polystab/operators.hpp"

namespace polystab {

using Rng = std::mt19937_64;

// Random complex vector with independent standard-normal components.
Vector random_vector(Rng& rng, Eigen::Index n);

// Random stable diagonalizable matrix: eigenvalues with Re in [-2, -0.2],
// |Im| <= 3, conjugated by a similarity with the requested condition number.
MatrixOperator random_stable_matrix(Rng& rng, Eigen::Index n, double condition = 3.0);

} // namespace polystab
