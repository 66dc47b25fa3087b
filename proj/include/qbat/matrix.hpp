#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qbat {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  /// Zero matrix of the given dimension; dim must be >= 1.
  explicit ComplexMatrix(std::size_t dim);
  /// Takes ownership of dim*dim row-major entries. Entries must be finite.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |row><col|
  static ComplexMatrix unit(std::size_t dim, std::size_t row, std::size_t col);
  /// |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::vector<Complex> column(std::size_t col) const;

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest entry magnitude.
  double max_abs() const;
  double frobenius_norm() const;
  bool is_finite() const;
  /// ||A - A^dagger||_max
  double hermiticity_defect() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scalar) { return lhs *= scalar; }
  friend ComplexMatrix operator*(Complex scalar, ComplexMatrix rhs) { return rhs *= scalar; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// max_{ij} |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian matrix. Construction symmetrizes (M + M^dagger)/2 and keeps the
/// defect measured before symmetrization.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m);

  /// Like the constructor, but throws HermiticityError when the defect exceeds tol.
  static HermitianMatrix checked(const ComplexMatrix& m, double tol);
  static HermitianMatrix diagonal(std::span<const double> values);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  operator const ComplexMatrix&() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  const Complex& operator()(std::size_t row, std::size_t col) const noexcept { return m_(row, col); }
  double construction_defect() const noexcept { return defect_; }

 private:
  ComplexMatrix m_;
  double defect_;
};

/// ab - ba
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// |A|^2 = A A^dagger
HermitianMatrix abs_sq(const ComplexMatrix& a);

/// Components of m in the orthonormal basis given by the columns of basis: U^dagger M U.
ComplexMatrix to_basis(const ComplexMatrix& basis, const ComplexMatrix& m);

/// tr(a b) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qbat
