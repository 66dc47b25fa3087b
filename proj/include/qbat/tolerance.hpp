#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qbat {

/// Every numeric threshold used by the library, in one place.
struct ToleranceConfig {
  // Jacobi eigensolver: stop when off-diagonal Frobenius norm <= jacobi_relative * ||M||_F.
  double jacobi_relative = 1e-13;
  int jacobi_max_sweeps = 100;

  // Density-matrix validation at construction.
  double state_trace = 1e-10;
  double state_psd = 1e-10;

  // Looser bounds applied to states produced by the propagator.
  double propagation_trace = 1e-8;
  double propagation_psd = 1e-8;

  // Smallest eigenvalue of rho accepted when taking log(rho).
  double rank_threshold = 1e-12;

  // Relative agreement required between two evaluations of <F>.
  double mean_consistency = 1e-9;
  // Relative agreement between trace and index forms of the eigenstate power.
  double power_consistency = 1e-10;
  // Relative agreement between operator and index forms of Theta.
  double theta_consistency = 1e-9;
  // Imaginary residual allowed on quantities that are real analytically.
  double imaginary_residual = 1e-10;

  // Eigenvector residual ||Hv - lambda v|| and scalar-action checks.
  double eigenvector_residual = 1e-10;

  // Hermiticity defect allowed in user supplied Hamiltonians.
  double config_hermiticity = 1e-10;

  // A claim quantity is "zero" when |x| <= claim_zero * scale.
  double claim_zero = 1e-10;

  /// Overrides one field by name. Throws ParameterError on an unknown key.
  void set(const std::string& key, double value);

  /// (name, value) pairs in declaration order.
  std::vector<std::pair<std::string, double>> entries() const;
};

}  // namespace qbat
