#include "qbat/random.hpp"

#include <cmath>

#include "qbat/spectral.hpp"

namespace qbat {

ComplexMatrix ginibre(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

HermitianMatrix random_hermitian(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  return HermitianMatrix(Complex(0.5) * (g + g.adjoint()));
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  return hermitian_eig(random_hermitian(dim, rng)).eigenvectors;
}

DensityMatrix random_density(std::size_t dim, Rng& rng, double mix) {
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= Complex((1.0 - mix) / rho.trace().real());
  rho += Complex(mix / static_cast<double>(dim)) * ComplexMatrix::identity(dim);
  return DensityMatrix(HermitianMatrix(rho));
}

}  // namespace qbat
