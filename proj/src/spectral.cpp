#include "qbat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qbat/errors.hpp"

namespace qbat {
namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p, q). The unitary is
// U = diag(1, conj(phase)) * R(c, s) restricted to the (p, q) plane, where
// the phase factor makes a(p, q) real before the real rotation.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;

  const Complex phase = apq / mag;
  const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  double t;
  if (std::abs(tau) > 1e150) {
    t = 0.5 / tau;
  } else {
    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex upp = c;
  const Complex upq = s;
  const Complex uqp = -s * std::conj(phase);
  const Complex uqq = c * std::conj(phase);

  const std::size_t d = a.dim();
  for (std::size_t r = 0; r < d; ++r) {
    const Complex arp = a(r, p);
    const Complex arq = a(r, q);
    a(r, p) = arp * upp + arq * uqp;
    a(r, q) = arp * upq + arq * uqq;

    const Complex vrp = v(r, p);
    const Complex vrq = v(r, q);
    v(r, p) = vrp * upp + vrq * uqp;
    v(r, q) = vrp * upq + vrq * uqq;
  }
  for (std::size_t col = 0; col < d; ++col) {
    const Complex apc = a(p, col);
    const Complex aqc = a(q, col);
    a(p, col) = std::conj(upp) * apc + std::conj(uqp) * aqc;
    a(q, col) = std::conj(upq) * apc + std::conj(uqq) * aqc;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

// Largest-magnitude component made real positive; near-equal magnitudes
// (relative 1e-12) count as ties and resolve to the lowest index.
void fix_phase(ComplexMatrix& v, std::size_t col) {
  const std::size_t d = v.dim();
  double largest = 0.0;
  for (std::size_t i = 0; i < d; ++i) largest = std::max(largest, std::abs(v(i, col)));
  if (largest == 0.0) return;
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (std::abs(v(i, col)) >= largest * (1.0 - 1e-12)) {
      pivot = i;
      break;
    }
  }
  const double mag = std::abs(v(pivot, col));
  const Complex correction = std::conj(v(pivot, col)) / mag;
  for (std::size_t i = 0; i < d; ++i) v(i, col) *= correction;
  v(pivot, col) = mag;
}

}  // namespace

ComplexMatrix Spectrum::reconstruct() const {
  const std::size_t d = eigenvectors.dim();
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        s += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
      out(i, j) = s;
    }
  return out;
}

Spectrum hermitian_eig(const HermitianMatrix& m, const ToleranceConfig& tol) {
  const std::size_t d = m.dim();
  ComplexMatrix a = m.matrix();
  ComplexMatrix v = ComplexMatrix::identity(d);

  const double threshold = tol.jacobi_relative * a.frobenius_norm();
  for (int sweep = 0;; ++sweep) {
    const double residual = off_diagonal_norm(a);
    if (residual <= threshold) break;
    if (sweep >= tol.jacobi_max_sweeps) {
      throw ConvergenceError("Jacobi eigensolver did not converge after " + std::to_string(sweep) +
                                 " sweeps; off-diagonal residual " + std::to_string(residual),
                             residual, sweep);
    }
    for (std::size_t p = 0; p + 1 < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  Spectrum out{std::vector<double>(d), ComplexMatrix(d)};
  for (std::size_t k = 0; k < d; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    fix_phase(out.eigenvectors, k);
  }
  return out;
}

HermitianMatrix matrix_function(const Spectrum& spectrum, const std::function<double(double)>& f) {
  const std::size_t d = spectrum.eigenvectors.dim();
  std::vector<double> mapped(d);
  for (std::size_t k = 0; k < d; ++k) {
    mapped[k] = f(spectrum.eigenvalues[k]);
    if (!std::isfinite(mapped[k])) {
      throw DomainError("matrix function undefined at eigenvalue " +
                            std::to_string(spectrum.eigenvalues[k]),
                        spectrum.eigenvalues[k]);
    }
  }
  return HermitianMatrix(Spectrum{std::move(mapped), spectrum.eigenvectors}.reconstruct());
}

HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                                const ToleranceConfig& tol) {
  return matrix_function(hermitian_eig(m, tol), f);
}

HermitianMatrix matrix_log(const HermitianMatrix& m, double floor, const ToleranceConfig& tol) {
  const Spectrum s = hermitian_eig(m, tol);
  for (double lambda : s.eigenvalues) {
    if (!(lambda > floor)) {
      throw DomainError("log undefined: eigenvalue " + std::to_string(lambda) + " <= " +
                            std::to_string(floor),
                        lambda);
    }
  }
  return matrix_function(s, [](double x) { return std::log(x); });
}

HermitianMatrix matrix_exp(const HermitianMatrix& m, const ToleranceConfig& tol) {
  return matrix_function(hermitian_eig(m, tol), [](double x) { return std::exp(x); });
}

}  // namespace qbat
