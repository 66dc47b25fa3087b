#pragma once

#include <functional>
#include <vector>

#include "qbat/matrix.hpp"
#include "qbat/tolerance.hpp"

namespace qbat {

/// Eigendecomposition M = U diag(eigenvalues) U^dagger.
struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns

  ComplexMatrix reconstruct() const;
  std::vector<Complex> eigenvector(std::size_t k) const { return eigenvectors.column(k); }
};

/// Cyclic complex Jacobi diagonalization.
///
/// Output is deterministic: eigenvalues ascending with exact ties kept in
/// diagonal order, and each eigenvector's phase chosen so that its
/// largest-magnitude component (lowest index on ties) is real positive.
/// Throws ConvergenceError if `tol.jacobi_max_sweeps` sweeps do not bring the
/// off-diagonal Frobenius norm below `tol.jacobi_relative * ||M||_F`.
Spectrum hermitian_eig(const HermitianMatrix& m, const ToleranceConfig& tol = {});

/// U diag(f(lambda)) U^dagger. Throws DomainError if f returns a non-finite value.
HermitianMatrix matrix_function(const Spectrum& spectrum, const std::function<double(double)>& f);
HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                                const ToleranceConfig& tol = {});

/// Natural log; every eigenvalue must exceed `floor`, otherwise DomainError.
HermitianMatrix matrix_log(const HermitianMatrix& m, double floor, const ToleranceConfig& tol = {});
HermitianMatrix matrix_exp(const HermitianMatrix& m, const ToleranceConfig& tol = {});

}  // namespace qbat
