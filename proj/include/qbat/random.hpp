#pragma once

#include <cstddef>
#include <random>

#include "qbat/matrix.hpp"
#include "qbat/open_system.hpp"

namespace qbat {

using Rng = std::mt19937_64;

/// i.i.d. complex standard normal entries, E|z|^2 = 1.
ComplexMatrix ginibre(std::size_t dim, Rng& rng);

/// (G + G^dagger) / 2 for a Ginibre G.
HermitianMatrix random_hermitian(std::size_t dim, Rng& rng);

/// Eigenvectors of a random Hermitian matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

/// (1 - mix) G G^dagger / tr(G G^dagger) + mix I / d; full rank for mix > 0.
DensityMatrix random_density(std::size_t dim, Rng& rng, double mix = 0.1);

}  // namespace qbat
