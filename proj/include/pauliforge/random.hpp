#pragma once

#include <random>

#include "pauliforge/types.hpp"

namespace pauliforge {

VectorXcd random_complex_gaussian(int dim, std::mt19937_64& rng);

// Unit vector uniform on the complex sphere.
VectorXcd random_unit_vector(int dim, std::mt19937_64& rng);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// R-diagonal phases folded back in.
MatrixXcd random_unitary(int dim, std::mt19937_64& rng);

// Uniform point on the probability simplex (Dirichlet(1,...,1)).
VectorXd random_prob_vector(int dim, std::mt19937_64& rng);

}  // namespace pauliforge
