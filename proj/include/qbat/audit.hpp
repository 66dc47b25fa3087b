#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbat/free_energy.hpp"
#include "qbat/open_system.hpp"
#include "qbat/tolerance.hpp"

namespace qbat {

/// One eigenstate scenario: the model, the H eigenvector index k0 used as
/// the battery state, and the settings of the regularization sweep.
struct ScenarioSpec {
  std::string name;
  LindbladModel model;
  double beta = 1.0;
  std::size_t k0 = 0;
  std::vector<double> epsilons;  // strictly descending, each in (0, 1)
  double step = 1e-3;
  double horizon = 1.0;
  std::uint64_t seed = 42;

  /// Throws ScenarioError on violated invariants.
  void validate() const;
};

enum class ClaimStatus { confirmed, violated, inconclusive };
const char* to_string(ClaimStatus status);

/// Classification of a claim quantity against zero.
enum class Zeroness { zero, nonzero, straddle };

/// |x| <= tol*scale is zero, |x| >= 10*tol*scale is nonzero, anything between straddles.
Zeroness classify(double value, double scale, double tol);

/// Scale used for claim tolerances: max(1, ||H||_max, max_j gamma_j ||L_j||_max^2).
double claim_scale(const LindbladModel& model);

/// Everything the claims are evaluated on, for one (model, k0).
struct EigenstateEvaluation {
  std::size_t k0;
  double energy;                       // w_k0
  std::vector<double> theta;           // sum_i |L^{k0 i}|^2 (w_i - w_k0)^2 per channel
  std::vector<double> theta_transposed;  // sum_i |L^{i k0}|^2 (w_i - w_k0)^2 per channel
  EigenstatePower power;
  VanishingCondition condition;
  double scale;
};

/// Throws ScenarioError if k0 is out of range or the computed eigenvector
/// fails ||H v - w v|| <= tol.eigenvector_residual * max(1, ||H||_max).
EigenstateEvaluation evaluate_eigenstate(const LindbladModel& model, std::size_t k0,
                                         const ToleranceConfig& tol = {});

struct ClaimOutcome {
  std::string claim;
  ClaimStatus status;
  bool vacuous;  // premise false, so the implication holds trivially
};

/// C1: all Theta zero => P zero. C2: P zero => all Theta zero.
/// C3: vanishing condition <=> all Theta zero. The *_transposed variants
/// repeat each claim with the transposed index order of Theta.
std::vector<ClaimOutcome> evaluate_claims(const EigenstateEvaluation& eval, const ToleranceConfig& tol = {});

/// HYPOTHESIS_REFUTED, POWER_WITHOUT_THETA, THETA_WITHOUT_POWER, CONSISTENT or INCONCLUSIVE.
std::string headline_verdict(const EigenstateEvaluation& eval, const ToleranceConfig& tol = {});

struct Witness {
  std::string source;
  std::size_t k0;
  std::vector<double> theta;
  std::vector<double> theta_transposed;
  double power;
  bool condition;
};

struct ClaimVerdict {
  std::string claim;
  ClaimStatus status;
  std::optional<Witness> witness;  // present unless confirmed
};

struct EpsilonRow {
  double epsilon;
  double power_numeric;     // tr(L[rho_eps] F_eps)
  double energy_rate;       // tr(L[rho_eps] H)
  double entropy_rate;      // -tr(L[rho_eps] log rho_eps)
  double energy_rate_step;  // one RK4 step: (E(h) - E(0)) / h
  std::optional<std::string> error;
};

/// Least-squares fit entropy_rate ~ a + b ln(eps).
struct LogFit {
  double a;
  double b;
};

struct EpsilonSweep {
  std::vector<EpsilonRow> rows;
  std::optional<LogFit> entropy_fit;  // needs two valid rows
  double reference_power;             // closed-form eigenstate power
  double convergence_constant;        // max |energy_rate - reference_power| / eps
};

/// Regularizes |k0><k0| with every epsilon in the list and records the
/// power, energy current and entropy production at t0. Numeric failures are
/// recorded on their row and do not abort the sweep.
EpsilonSweep epsilon_sweep(const ScenarioSpec& spec, const ToleranceConfig& tol = {});

struct AuditReport {
  std::string scenario;
  std::size_t k0;
  double energy;
  std::vector<double> theta_values;
  std::vector<double> theta_transposed;
  double power_eq7;            // closed form sum_j gamma_j sum_i |L^{i k0}|^2 (w_i - w_k0)
  double power_trace;          // sum_j gamma_j tr(D_j[|k0><k0|] H)
  double numeric_energy_rate;  // tr(L[|k0><k0|] H)
  double claim_scale;
  VanishingCondition vanishing;
  std::string headline;
  EpsilonSweep sweep;
  std::vector<ClaimVerdict> claim_verdicts;
};

/// Full audit of one eigenstate scenario, including the epsilon sweep.
/// Throws ScenarioError for an invalid spec.
AuditReport eigenstate_audit(const ScenarioSpec& spec, const ToleranceConfig& tol = {});

/// A named (model, k0) pair evaluated ahead of the random ensemble.
struct NamedScenario {
  std::string name;
  LindbladModel model;
  std::size_t k0;
};

/// Hand-constructed qubit and qutrit scenarios, including the sigma_x
/// refutation case and the sigma_minus dark state.
std::vector<NamedScenario> bundled_scenarios();

struct EnsembleConfig {
  std::uint64_t seed = 42;
  std::size_t dim_min = 2;
  std::size_t dim_max = 6;
  std::size_t trials = 100;
  // Probability that an entry of L_j (in the H eigenbasis) is zeroed. 0 gives
  // plain Ginibre channels.
  double sparsity = 0.0;
  bool include_bundled = true;
};

/// Random model for trial `trial`; depends only on (seed, trial).
NamedScenario draw_model(const EnsembleConfig& config, std::size_t trial);

struct Counterexample {
  std::string source;
  std::string claim;
  ClaimStatus status;  // violated or inconclusive
  LindbladModel model;
  std::size_t k0;
  std::vector<double> theta;
  std::vector<double> theta_transposed;
  double power;
  bool condition;
};

struct ClaimTally {
  std::string claim;
  ClaimStatus status;
  std::size_t evaluated = 0;
  std::size_t confirmed = 0;
  std::size_t vacuous = 0;
  std::size_t violated = 0;
  std::size_t inconclusive = 0;
};

struct FalsifierReport {
  EnsembleConfig config;
  std::size_t scenarios_evaluated = 0;
  std::vector<ClaimTally> tallies;
  std::vector<Counterexample> counterexamples;
};

/// Evaluates every claim over the bundled scenarios (if enabled) and a
/// seeded random ensemble. Deterministic given the config.
FalsifierReport claim_falsifier(const EnsembleConfig& config, const ToleranceConfig& tol = {});

}  // namespace qbat
