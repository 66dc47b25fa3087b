#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qbat/matrix.hpp"
#include "qbat/open_system.hpp"
#include "qbat/tolerance.hpp"

namespace qbat {

/// Inverse temperature plus the battery's Lindblad model.
class BatteryContext {
 public:
  BatteryContext(double beta, LindbladModel model, double rank_threshold = 1e-12);

  double beta() const noexcept { return beta_; }
  const LindbladModel& model() const noexcept { return model_; }
  double rank_threshold() const noexcept { return rank_threshold_; }

 private:
  double beta_;
  LindbladModel model_;
  double rank_threshold_;
};

/// F, its mean <F> = tr(F rho), the fluctuation dF = F - <F> I and the
/// eigenbasis of dF (eigenvalues w ascending, eigenvectors as columns).
struct FreeEnergyDecomposition {
  HermitianMatrix f_op;
  HermitianMatrix delta_f;
  double mean;
  std::vector<double> w;
  ComplexMatrix basis;
};

/// Decomposes a given free-energy-like operator against rho.
FreeEnergyDecomposition decompose_free_energy(const HermitianMatrix& f_op, const DensityMatrix& rho,
                                              const ToleranceConfig& tol = {});

/// F = H + log(rho) / beta for full-rank rho.
///
/// <F> is evaluated both as tr(F rho) and as tr(rho H) - S(rho) / beta; the
/// two must agree to `tol.mean_consistency` (relative), else ConsistencyError.
/// Throws RankDeficientError when the smallest eigenvalue of rho does not
/// exceed the context's rank threshold.
FreeEnergyDecomposition free_energy_operator(const DensityMatrix& rho, const BatteryContext& ctx,
                                             const ToleranceConfig& tol = {});

/// tr(rho H) - S(rho) / beta. Defined for rank-deficient states too.
double mean_free_energy(const DensityMatrix& rho, const BatteryContext& ctx);

/// d<F>/dt = tr(L[rho] F). Uses tr(L[rho]) = 0 to drop the d(log rho)/dt term.
double power_analytic(const DensityMatrix& rho, const BatteryContext& ctx, const ToleranceConfig& tol = {});

/// Central difference of mean_free_energy at trajectory point `index`
/// (requires 1 <= index <= size - 2).
double power_fd(const Trajectory& traj, const BatteryContext& ctx, std::size_t index);

/// <|[dF, L]|^2> = tr(rho C C^dagger), C = [dF, L].
double theta_operator_form(const FreeEnergyDecomposition& decomp, const DensityMatrix& rho,
                           const ComplexMatrix& l, const ToleranceConfig& tol = {});

/// Triple sum over i, k, l of
///   rho_{lk} L^{ki} conj(L^{li}) (w_i^2 - w_i w_l - w_k w_i + w_l w_k)
/// with every component expressed in the eigenbasis whose eigenvalues are w.
double theta_index_form(std::span<const double> w, const ComplexMatrix& rho_components,
                        const ComplexMatrix& l_components, const ToleranceConfig& tol = {});

/// sum_i |L^{k0 i}|^2 (w_i - w_k0)^2: Theta for rho = |k0><k0|.
double theta_eigenstate(std::size_t k0, std::span<const double> w, const ComplexMatrix& l_components);

/// sum_i |L^{i k0}|^2 (w_i - w_k0)^2: same sum with the index order of L swapped.
double theta_eigenstate_transposed(std::size_t k0, std::span<const double> w,
                                   const ComplexMatrix& l_components);

struct ThetaEntry {
  double theta_operator;
  double theta_index;
  double discrepancy;  // theta_index - theta_operator
};

/// Both Theta evaluations for every channel of the model. Throws
/// ConsistencyError if they disagree beyond `tol.theta_consistency` relative.
std::vector<ThetaEntry> theta_report(const FreeEnergyDecomposition& decomp, const DensityMatrix& rho,
                                     const LindbladModel& model, const ToleranceConfig& tol = {});

/// H eigenbasis used by every eigenstate-scenario quantity: w are the
/// eigenvalues of H and each jump operator is rewritten in that basis.
struct EigenstateFrame {
  Spectrum h_spectrum;
  std::vector<ComplexMatrix> l_components;
};

EigenstateFrame eigenstate_frame(const LindbladModel& model, const ToleranceConfig& tol = {});

struct EigenstatePower {
  double trace_form;  // sum_j gamma_j tr(D_j[|k0><k0|] H)
  double index_form;  // sum_j gamma_j sum_i |L_j^{i k0}|^2 (w_i - w_k0)
};

/// Both evaluations of the charging power from the H eigenstate |k0>.
/// Throws ParameterError for k0 out of range.
EigenstatePower eigenstate_power_forms(std::size_t k0, const LindbladModel& model, const EigenstateFrame& frame);

/// Charging power at an H eigenstate. The trace and index forms must agree
/// to `tol.power_consistency * max(1, |P|)`, otherwise ConsistencyError.
double power_eigenstate(std::size_t k0, const BatteryContext& ctx, const ToleranceConfig& tol = {});

/// Whether the simultaneous-vanishing condition holds at |k0>:
/// H = w_k0 |k0><k0|, or every L_j acts as a scalar on each eigenvector of H
/// with nonzero eigenvalue. The Theta values are computed independently so a
/// caller can test the claimed equivalence.
struct VanishingCondition {
  bool holds;
  bool hamiltonian_is_projector;
  bool channels_act_trivially;
  std::vector<bool> channel_trivial;
  std::vector<double> theta_values;
  std::string explanation;
};

VanishingCondition vanishing_condition(const BatteryContext& ctx, std::size_t k0, const ToleranceConfig& tol = {});
VanishingCondition vanishing_condition(const LindbladModel& model, const EigenstateFrame& frame, std::size_t k0,
                                       const ToleranceConfig& tol = {});

}  // namespace qbat
