// Test-only helpers: seeded random inputs and brute-force oracles that do
// not go through the library's arithmetic.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qbat/matrix.hpp"
#include "qbat/open_system.hpp"
#include "qbat/random.hpp"

namespace qbat::test {

using Grid = std::vector<std::vector<Complex>>;

inline Grid to_grid(const ComplexMatrix& m) {
  Grid g(m.dim(), std::vector<Complex>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) g[i][j] = m(i, j);
  return g;
}

// Naive product of a with the conjugate transpose of b.
inline Grid mul_adjoint(const Grid& a, const Grid& b) {
  const std::size_t d = a.size();
  Grid out(d, std::vector<Complex>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) out[i][j] += a[i][k] * std::conj(b[j][k]);
  return out;
}

inline double max_diff(const ComplexMatrix& m, const Grid& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) worst = std::max(worst, std::abs(m(i, j) - g[i][j]));
  return worst;
}

inline ComplexMatrix scaled_ginibre(std::size_t d, Rng& rng, double scale) {
  ComplexMatrix g = ginibre(d, rng);
  g *= Complex(scale);
  return g;
}

inline ComplexMatrix sigma_x() { return ComplexMatrix::unit(2, 0, 1) + ComplexMatrix::unit(2, 1, 0); }
inline ComplexMatrix sigma_plus() { return ComplexMatrix::unit(2, 1, 0); }   // |1><0|
inline ComplexMatrix sigma_minus() { return ComplexMatrix::unit(2, 0, 1); }  // |0><1|

inline HermitianMatrix qubit_h() {
  const double levels[] = {0.0, 1.0};
  return HermitianMatrix::diagonal(levels);
}

inline LindbladModel qubit_model(const ComplexMatrix& l, double rate = 1.0) {
  return LindbladModel(qubit_h(), {{rate, l}});
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace qbat::test
