#include "qbat/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbat {
namespace {

void validate_state(const HermitianMatrix& rho, const Spectrum& spectrum, double trace_tol, double psd_tol) {
  const double trace_defect = std::abs(rho.matrix().trace().real() - 1.0);
  if (trace_defect > trace_tol) {
    throw StateError("density matrix trace defect " + std::to_string(trace_defect) + " exceeds " +
                     std::to_string(trace_tol));
  }
  const double min_eig = spectrum.eigenvalues.front();
  if (min_eig < -psd_tol) {
    throw StateError("density matrix has negative eigenvalue " + std::to_string(min_eig));
  }
}

ComplexMatrix dissipator_raw(const ComplexMatrix& l, const ComplexMatrix& rho) {
  const ComplexMatrix ldag = l.adjoint();
  const ComplexMatrix ldl = ldag * l;
  ComplexMatrix out = l * rho * ldag;
  out -= 0.5 * (ldl * rho + rho * ldl);
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(HermitianMatrix rho, const ToleranceConfig& tol)
    : rho_(std::move(rho)), spectrum_(hermitian_eig(rho_, tol)) {
  validate_state(rho_, spectrum_, tol.state_trace, tol.state_psd);
}

DensityMatrix::DensityMatrix(HermitianMatrix rho, Spectrum spectrum, double trace_tol, double psd_tol)
    : rho_(std::move(rho)), spectrum_(std::move(spectrum)) {
  if (spectrum_.eigenvectors.dim() != rho_.dim()) throw DimensionError("spectrum does not match state");
  validate_state(rho_, spectrum_, trace_tol, psd_tol);
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  return DensityMatrix(HermitianMatrix(ComplexMatrix::outer(psi)));
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t k) {
  if (k >= dim) throw ParameterError("basis index " + std::to_string(k) + " out of range");
  return DensityMatrix(HermitianMatrix(ComplexMatrix::unit(dim, k, k)));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(HermitianMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim))));
}

DensityMatrix DensityMatrix::thermal(const HermitianMatrix& h, double beta, const ToleranceConfig& tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive and finite");
  const Spectrum s = hermitian_eig(h, tol);
  const double ground = s.eigenvalues.front();
  double z = 0.0;
  for (double e : s.eigenvalues) z += std::exp(-beta * (e - ground));
  return DensityMatrix(
      matrix_function(s, [&](double e) { return std::exp(-beta * (e - ground)) / z; }), tol);
}

LindbladModel::LindbladModel(HermitianMatrix hamiltonian, std::vector<JumpChannel> channels)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
  if (hamiltonian_.dim() < 2) throw DimensionError("model dimension must be at least 2");
  for (std::size_t j = 0; j < channels_.size(); ++j) {
    const auto& ch = channels_[j];
    if (ch.op.dim() != hamiltonian_.dim()) {
      throw DimensionError("channel " + std::to_string(j) + " operator dimension mismatch");
    }
    if (!std::isfinite(ch.rate) || ch.rate < 0.0) {
      throw ParameterError("channel " + std::to_string(j) + " rate must be finite and nonnegative");
    }
  }
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : rho.spectrum().eigenvalues) {
    const double p = std::clamp(lambda, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

HermitianMatrix dissipator(const ComplexMatrix& l, const DensityMatrix& rho) {
  if (l.dim() != rho.dim()) throw DimensionError("dissipator: dimension mismatch");
  return HermitianMatrix(dissipator_raw(l, rho.matrix()));
}

ComplexMatrix apply_liouvillian(const LindbladModel& model, const ComplexMatrix& rho) {
  if (rho.dim() != model.dim()) throw DimensionError("liouvillian: dimension mismatch");
  ComplexMatrix out = Complex(0.0, -1.0) * commutator(model.hamiltonian(), rho);
  for (const auto& ch : model.channels()) {
    if (ch.rate == 0.0) continue;
    out += ch.rate * dissipator_raw(ch.op, rho);
  }
  if (!out.is_finite()) throw NumericError("liouvillian: non-finite result");
  return out;
}

HermitianMatrix liouvillian(const LindbladModel& model, const DensityMatrix& rho) {
  return HermitianMatrix(apply_liouvillian(model, rho.matrix()));
}

std::vector<double> uniform_grid(double t0, double horizon, double step) {
  if (!(step > 0.0) || !(horizon >= step) || !std::isfinite(t0) || !std::isfinite(horizon)) {
    throw ParameterError("time grid requires step > 0 and horizon >= step");
  }
  const auto n = static_cast<std::size_t>(std::llround(horizon / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = t0 + static_cast<double>(i) * step;
  return grid;
}

Trajectory propagate(const LindbladModel& model, const DensityMatrix& rho0, std::span<const double> grid,
                     const ToleranceConfig& tol) {
  if (grid.empty()) throw ParameterError("propagate: empty time grid");
  if (rho0.dim() != model.dim()) throw DimensionError("propagate: state/model dimension mismatch");
  if (grid.size() > 1) {
    const double h0 = grid[1] - grid[0];
    if (!(h0 > 0.0)) throw ParameterError("propagate: time grid must be strictly increasing");
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double h = grid[i + 1] - grid[i];
      if (!(h > 0.0) || std::abs(h - h0) > 1e-9 * h0) {
        throw ParameterError("propagate: time grid must be uniform (step " + std::to_string(i) + ")");
      }
    }
  }

  Trajectory traj;
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  traj.diagnostics.reserve(grid.size());
  traj.times.push_back(grid[0]);
  traj.states.push_back(rho0);
  traj.diagnostics.push_back({rho0.trace_defect(), rho0.hermitian().construction_defect(), rho0.min_eigenvalue()});

  ComplexMatrix current = rho0.matrix();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    const ComplexMatrix k1 = apply_liouvillian(model, current);
    const ComplexMatrix k2 = apply_liouvillian(model, current + Complex(h / 2) * k1);
    const ComplexMatrix k3 = apply_liouvillian(model, current + Complex(h / 2) * k2);
    const ComplexMatrix k4 = apply_liouvillian(model, current + Complex(h) * k3);
    current += Complex(h / 6) * (k1 + Complex(2.0) * k2 + Complex(2.0) * k3 + k4);

    HermitianMatrix state(current);
    Spectrum spectrum = hermitian_eig(state, tol);
    const StepDiagnostics diag{std::abs(current.trace().real() - 1.0), state.construction_defect(),
                               spectrum.eigenvalues.front()};
    if (diag.trace_defect > tol.propagation_trace || diag.min_eigenvalue < -tol.propagation_psd) {
      throw PropagationError("propagation left tolerance band at step " + std::to_string(i) +
                                 ": trace defect " + std::to_string(diag.trace_defect) +
                                 ", min eigenvalue " + std::to_string(diag.min_eigenvalue),
                             i, diag, std::make_shared<const Trajectory>(std::move(traj)));
    }
    traj.times.push_back(grid[i]);
    traj.states.emplace_back(std::move(state), std::move(spectrum), tol.propagation_trace,
                             tol.propagation_psd);
    traj.diagnostics.push_back(diag);
  }
  return traj;
}

DensityMatrix regularize(const DensityMatrix& rho, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("regularization epsilon must lie in (0, 1)");
  const auto d = static_cast<double>(rho.dim());
  ComplexMatrix mixed = Complex(1.0 - eps) * rho.matrix();
  mixed += Complex(eps / d) * ComplexMatrix::identity(rho.dim());
  return DensityMatrix(HermitianMatrix(mixed));
}

}  // namespace qbat
