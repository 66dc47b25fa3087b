#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "qbat/errors.hpp"
#include "qbat/matrix.hpp"
#include "qbat/spectral.hpp"
#include "qbat/tolerance.hpp"

namespace qbat {

/// Quantum state: Hermitian, unit trace, positive semidefinite.
///
/// The spectrum is computed once at construction and cached, since the
/// entropy and log(rho) both need it.
class DensityMatrix {
 public:
  /// Validates |tr rho - 1| <= tol.state_trace and lambda_min >= -tol.state_psd;
  /// throws StateError.
  explicit DensityMatrix(HermitianMatrix rho, const ToleranceConfig& tol = {});
  /// Validation against explicit bounds, reusing a spectrum already computed for rho.
  DensityMatrix(HermitianMatrix rho, Spectrum spectrum, double trace_tol, double psd_tol);

  static DensityMatrix pure(std::span<const Complex> psi);
  static DensityMatrix basis_state(std::size_t dim, std::size_t k);
  static DensityMatrix maximally_mixed(std::size_t dim);
  /// e^{-beta H} / Z
  static DensityMatrix thermal(const HermitianMatrix& h, double beta, const ToleranceConfig& tol = {});

  const HermitianMatrix& hermitian() const noexcept { return rho_; }
  const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
  operator const ComplexMatrix&() const noexcept { return rho_.matrix(); }
  std::size_t dim() const noexcept { return rho_.dim(); }
  Complex operator()(std::size_t i, std::size_t j) const { return rho_.matrix()(i, j); }
  const Spectrum& spectrum() const noexcept { return spectrum_; }
  double min_eigenvalue() const noexcept { return spectrum_.eigenvalues.front(); }
  double trace_defect() const noexcept { return std::abs(rho_.matrix().trace().real() - 1.0); }

 private:
  HermitianMatrix rho_;
  Spectrum spectrum_;
};

struct JumpChannel {
  double rate;  // gamma_j >= 0
  ComplexMatrix op;
};

/// H plus dissipative channels of a time-independent GKSL generator.
class LindbladModel {
 public:
  /// Requires dim >= 2, matching dimensions and finite nonnegative rates.
  LindbladModel(HermitianMatrix hamiltonian, std::vector<JumpChannel> channels);

  const HermitianMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<JumpChannel>& channels() const noexcept { return channels_; }
  std::size_t dim() const noexcept { return hamiltonian_.dim(); }

 private:
  HermitianMatrix hamiltonian_;
  std::vector<JumpChannel> channels_;
};

struct StepDiagnostics {
  double trace_defect;
  double hermiticity_defect;
  double min_eigenvalue;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<StepDiagnostics> diagnostics;

  std::size_t size() const noexcept { return times.size(); }
};

/// Propagated state left the tolerance band; carries the trajectory up to
/// (not including) the offending step.
class PropagationError : public Error {
 public:
  PropagationError(const std::string& what, std::size_t step, StepDiagnostics defects,
                   std::shared_ptr<const Trajectory> partial)
      : Error(what), step_(step), defects_(defects), partial_(std::move(partial)) {}

  std::size_t step() const noexcept { return step_; }
  const StepDiagnostics& defects() const noexcept { return defects_; }
  const Trajectory& partial() const noexcept { return *partial_; }

 private:
  std::size_t step_;
  StepDiagnostics defects_;
  std::shared_ptr<const Trajectory> partial_;
};

/// -sum lambda ln lambda in nats, eigenvalues clipped to [0, 1], 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// L rho L^dagger - {L^dagger L, rho} / 2
HermitianMatrix dissipator(const ComplexMatrix& l, const DensityMatrix& rho);

/// -i[H, rho] + sum_j gamma_j D_j[rho]
HermitianMatrix liouvillian(const LindbladModel& model, const DensityMatrix& rho);

/// The generator applied to an arbitrary matrix (no state validation); used
/// for Runge-Kutta stages.
ComplexMatrix apply_liouvillian(const LindbladModel& model, const ComplexMatrix& rho);

/// t0, t0 + step, ..., t0 + n*step with n = round(horizon / step).
std::vector<double> uniform_grid(double t0, double horizon, double step);

/// Fixed-step classical RK4 over a uniform grid. States are never
/// renormalized; each is checked against the propagation tolerances and a
/// breach raises PropagationError.
Trajectory propagate(const LindbladModel& model, const DensityMatrix& rho0, std::span<const double> grid,
                     const ToleranceConfig& tol = {});

/// (1 - eps) rho + eps I / d, for eps in (0, 1).
DensityMatrix regularize(const DensityMatrix& rho, double eps);

}  // namespace qbat
