#include "qbat/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbat/errors.hpp"
#include "qbat/random.hpp"

namespace qbat {
namespace {

enum class Tri { yes, no, unknown };

Tri all_zero(const std::vector<double>& values, double scale, double tol) {
  bool unknown = false;
  for (double v : values) {
    const Zeroness z = classify(v, scale, tol);
    if (z == Zeroness::nonzero) return Tri::no;
    if (z == Zeroness::straddle) unknown = true;
  }
  return unknown ? Tri::unknown : Tri::yes;
}

Tri is_zero(double value, double scale, double tol) {
  switch (classify(value, scale, tol)) {
    case Zeroness::zero: return Tri::yes;
    case Zeroness::nonzero: return Tri::no;
    default: return Tri::unknown;
  }
}

ClaimOutcome implication(std::string claim, Tri premise, Tri conclusion) {
  if (premise == Tri::no) return {std::move(claim), ClaimStatus::confirmed, true};
  if (conclusion == Tri::yes) return {std::move(claim), ClaimStatus::confirmed, false};
  if (premise == Tri::yes && conclusion == Tri::no) return {std::move(claim), ClaimStatus::violated, false};
  return {std::move(claim), ClaimStatus::inconclusive, false};
}

ClaimOutcome equivalence(std::string claim, Tri lhs, Tri rhs) {
  if (lhs == Tri::unknown || rhs == Tri::unknown) return {std::move(claim), ClaimStatus::inconclusive, false};
  return {std::move(claim), lhs == rhs ? ClaimStatus::confirmed : ClaimStatus::violated, false};
}

Witness make_witness(const std::string& source, const EigenstateEvaluation& eval) {
  return Witness{source, eval.k0, eval.theta, eval.theta_transposed, eval.power.index_form, eval.condition.holds};
}

LindbladModel qubit_model(std::vector<JumpChannel> channels) {
  const double levels[] = {0.0, 1.0};
  return LindbladModel(HermitianMatrix::diagonal(levels), std::move(channels));
}

}  // namespace

const char* to_string(ClaimStatus status) {
  switch (status) {
    case ClaimStatus::confirmed: return "confirmed";
    case ClaimStatus::violated: return "violated";
    case ClaimStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Zeroness classify(double value, double scale, double tol) {
  const double a = std::abs(value);
  if (a <= tol * scale) return Zeroness::zero;
  if (a >= 10.0 * tol * scale) return Zeroness::nonzero;
  return Zeroness::straddle;
}

double claim_scale(const LindbladModel& model) {
  double scale = std::max(1.0, model.hamiltonian().matrix().max_abs());
  for (const auto& ch : model.channels()) {
    const double m = ch.op.max_abs();
    scale = std::max(scale, ch.rate * m * m);
  }
  return scale;
}

void ScenarioSpec::validate() const {
  if (k0 >= model.dim()) {
    throw ScenarioError("k0 " + std::to_string(k0) + " out of range for dimension " + std::to_string(model.dim()));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ScenarioError("beta must be positive and finite");
  if (!(step > 0.0) || !(horizon >= step)) throw ScenarioError("need step > 0 and horizon >= step");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0)) throw ScenarioError("epsilon values must lie in (0, 1)");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ScenarioError("epsilon list must be strictly descending");
  }
}

EigenstateEvaluation evaluate_eigenstate(const LindbladModel& model, std::size_t k0, const ToleranceConfig& tol) {
  if (k0 >= model.dim()) throw ScenarioError("k0 " + std::to_string(k0) + " out of range");
  const EigenstateFrame frame = eigenstate_frame(model, tol);
  const auto& w = frame.h_spectrum.eigenvalues;

  const auto v = frame.h_spectrum.eigenvector(k0);
  const ComplexMatrix& h = model.hamiltonian();
  double residual = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Complex hv = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) hv += h(i, k) * v[k];
    residual = std::max(residual, std::abs(hv - w[k0] * v[i]));
  }
  if (residual > tol.eigenvector_residual * std::max(1.0, h.max_abs())) {
    throw ScenarioError("state k0 is not an eigenvector of H: residual " + std::to_string(residual));
  }

  EigenstateEvaluation eval{k0, w[k0], {}, {}, eigenstate_power_forms(k0, model, frame),
                            vanishing_condition(model, frame, k0, tol), claim_scale(model)};
  for (const auto& lc : frame.l_components) {
    eval.theta.push_back(theta_eigenstate(k0, w, lc));
    eval.theta_transposed.push_back(theta_eigenstate_transposed(k0, w, lc));
  }
  return eval;
}

std::vector<ClaimOutcome> evaluate_claims(const EigenstateEvaluation& eval, const ToleranceConfig& tol) {
  const double s = eval.scale;
  const double z = tol.claim_zero;
  const Tri power_zero = is_zero(eval.power.index_form, s, z);
  const Tri condition = eval.condition.holds ? Tri::yes : Tri::no;

  std::vector<ClaimOutcome> out;
  for (const auto& [suffix, theta] :
       {std::pair<std::string, const std::vector<double>*>{"", &eval.theta},
        std::pair<std::string, const std::vector<double>*>{"_transposed", &eval.theta_transposed}}) {
    const Tri theta_zero = all_zero(*theta, s, z);
    out.push_back(implication("C1" + suffix, theta_zero, power_zero));
    out.push_back(implication("C2" + suffix, power_zero, theta_zero));
    out.push_back(equivalence("C3" + suffix, condition, theta_zero));
  }
  return out;
}

std::string headline_verdict(const EigenstateEvaluation& eval, const ToleranceConfig& tol) {
  const Tri power_zero = is_zero(eval.power.index_form, eval.scale, tol.claim_zero);
  const Tri theta_zero = all_zero(eval.theta, eval.scale, tol.claim_zero);
  if (power_zero == Tri::no && theta_zero == Tri::no) return "HYPOTHESIS_REFUTED";
  if (power_zero == Tri::no && theta_zero == Tri::yes) return "POWER_WITHOUT_THETA";
  if (power_zero == Tri::yes && theta_zero == Tri::no) return "THETA_WITHOUT_POWER";
  if (power_zero == Tri::yes && theta_zero == Tri::yes) return "CONSISTENT";
  return "INCONCLUSIVE";
}

EpsilonSweep epsilon_sweep(const ScenarioSpec& spec, const ToleranceConfig& tol) {
  spec.validate();
  const LindbladModel& model = spec.model;
  const EigenstateFrame frame = eigenstate_frame(model, tol);
  const DensityMatrix eigenstate = DensityMatrix::pure(frame.h_spectrum.eigenvector(spec.k0));
  const BatteryContext ctx(spec.beta, model, tol.rank_threshold);
  const HermitianMatrix& h = model.hamiltonian();

  EpsilonSweep sweep{{}, std::nullopt, eigenstate_power_forms(spec.k0, model, frame).index_form, 0.0};
  for (double eps : spec.epsilons) {
    EpsilonRow row{eps, NAN, NAN, NAN, NAN, std::nullopt};
    try {
      const DensityMatrix rho = regularize(eigenstate, eps);
      const HermitianMatrix rate = liouvillian(model, rho);
      const HermitianMatrix log_rho = matrix_log(rho.hermitian(), tol.rank_threshold, tol);
      row.energy_rate = trace_product(rate, h).real();
      row.entropy_rate = -trace_product(rate, log_rho).real();
      row.power_numeric = power_analytic(rho, ctx, tol);

      const double grid[] = {0.0, spec.step};
      const Trajectory traj = propagate(model, rho, grid, tol);
      row.energy_rate_step = (trace_product(traj.states[1], h).real() - trace_product(traj.states[0], h).real()) /
                             spec.step;
    } catch (const Error& e) {
      row.error = e.what();
    }
    sweep.rows.push_back(row);
  }

  std::vector<std::pair<double, double>> points;
  for (const auto& row : sweep.rows) {
    if (row.error) continue;
    points.emplace_back(std::log(row.epsilon), row.entropy_rate);
    sweep.convergence_constant =
        std::max(sweep.convergence_constant, std::abs(row.energy_rate - sweep.reference_power) / row.epsilon);
  }
  if (points.size() >= 2) {
    const auto n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
      mx += x / n;
      my += y / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
    }
    if (sxx > 0.0) {
      const double b = sxy / sxx;
      sweep.entropy_fit = LogFit{my - b * mx, b};
    }
  }
  return sweep;
}

AuditReport eigenstate_audit(const ScenarioSpec& spec, const ToleranceConfig& tol) {
  spec.validate();
  const EigenstateEvaluation eval = evaluate_eigenstate(spec.model, spec.k0, tol);
  const EigenstateFrame frame = eigenstate_frame(spec.model, tol);
  const DensityMatrix eigenstate = DensityMatrix::pure(frame.h_spectrum.eigenvector(spec.k0));

  AuditReport report{spec.name,
                     spec.k0,
                     eval.energy,
                     eval.theta,
                     eval.theta_transposed,
                     eval.power.index_form,
                     eval.power.trace_form,
                     trace_product(liouvillian(spec.model, eigenstate), spec.model.hamiltonian()).real(),
                     eval.scale,
                     eval.condition,
                     headline_verdict(eval, tol),
                     EpsilonSweep{},
                     {}};
  if (std::abs(report.power_eq7 - report.power_trace) >
      tol.power_consistency * std::max(1.0, std::abs(report.power_eq7))) {
    throw ConsistencyError("eigenstate power trace and index forms disagree", report.power_eq7, report.power_trace);
  }
  if (!spec.epsilons.empty()) report.sweep = epsilon_sweep(spec, tol);

  for (const auto& outcome : evaluate_claims(eval, tol)) {
    ClaimVerdict verdict{outcome.claim, outcome.status, std::nullopt};
    if (outcome.status != ClaimStatus::confirmed) verdict.witness = make_witness(spec.name, eval);
    report.claim_verdicts.push_back(std::move(verdict));
  }
  return report;
}

std::vector<NamedScenario> bundled_scenarios() {
  const auto sigma_x = ComplexMatrix::unit(2, 0, 1) + ComplexMatrix::unit(2, 1, 0);
  const auto sigma_minus = ComplexMatrix::unit(2, 0, 1);
  const auto sigma_plus = ComplexMatrix::unit(2, 1, 0);
  const double z[] = {1.0, -1.0};
  const auto sigma_z = ComplexMatrix::diagonal(z);

  const double ladder[] = {0.0, 1.0, 2.0};
  const auto raise = ComplexMatrix::unit(3, 1, 0) + ComplexMatrix::unit(3, 2, 1);
  const auto lower = raise.adjoint();

  std::vector<NamedScenario> out;
  out.push_back({"qubit_sigma_x", qubit_model({{1.0, sigma_x}}), 0});
  out.push_back({"qubit_dark_state", qubit_model({{1.0, sigma_minus}}), 0});
  out.push_back({"qubit_sigma_plus", qubit_model({{1.0, sigma_plus}}), 0});
  out.push_back({"qubit_dephasing", qubit_model({{1.0, sigma_z}}), 0});
  const double excited_only[] = {0.0, 2.0};
  out.push_back({"qubit_projector_hamiltonian",
                 LindbladModel(HermitianMatrix::diagonal(excited_only), {{1.0, sigma_x}}), 1});
  out.push_back({"qutrit_ladder",
                 LindbladModel(HermitianMatrix::diagonal(ladder), {{1.0, raise}, {0.5, lower}}), 1});
  return out;
}

NamedScenario draw_model(const EnsembleConfig& config, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  Rng rng(seq);
  std::uniform_int_distribution<std::size_t> dim_dist(config.dim_min, config.dim_max);
  const std::size_t d = dim_dist(rng);

  HermitianMatrix h = random_hermitian(d, rng);
  const ComplexMatrix basis = config.sparsity > 0.0 ? hermitian_eig(h).eigenvectors : ComplexMatrix::identity(d);

  std::uniform_int_distribution<int> count_dist(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int count = count_dist(rng);
  std::vector<JumpChannel> channels;
  for (int j = 0; j < count; ++j) {
    const double rate = 1.0 - unit(rng);  // (0, 1]
    ComplexMatrix l = ginibre(d, rng);
    if (config.sparsity > 0.0) {
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          if (unit(rng) < config.sparsity) l(r, c) = 0.0;
      l = basis * l * basis.adjoint();
    }
    channels.push_back({rate, std::move(l)});
  }
  std::uniform_int_distribution<std::size_t> k_dist(0, d - 1);
  const std::size_t k0 = k_dist(rng);
  return {"trial " + std::to_string(trial), LindbladModel(std::move(h), std::move(channels)), k0};
}

FalsifierReport claim_falsifier(const EnsembleConfig& config, const ToleranceConfig& tol) {
  if (config.trials < 1) throw ParameterError("claim_falsifier: trials must be at least 1");
  if (config.dim_min < 2 || config.dim_max < config.dim_min) {
    throw ParameterError("claim_falsifier: need 2 <= dim_min <= dim_max");
  }
  if (!(config.sparsity >= 0.0 && config.sparsity < 1.0)) {
    throw ParameterError("claim_falsifier: sparsity must lie in [0, 1)");
  }

  FalsifierReport report{config, 0, {}, {}};
  auto tally_for = [&](const std::string& claim) -> ClaimTally& {
    for (auto& t : report.tallies)
      if (t.claim == claim) return t;
    report.tallies.push_back(ClaimTally{claim, ClaimStatus::confirmed});
    return report.tallies.back();
  };

  auto run = [&](const NamedScenario& scenario) {
    const EigenstateEvaluation eval = evaluate_eigenstate(scenario.model, scenario.k0, tol);
    ++report.scenarios_evaluated;
    for (const auto& outcome : evaluate_claims(eval, tol)) {
      ClaimTally& t = tally_for(outcome.claim);
      ++t.evaluated;
      switch (outcome.status) {
        case ClaimStatus::confirmed:
          ++t.confirmed;
          if (outcome.vacuous) ++t.vacuous;
          continue;
        case ClaimStatus::violated: ++t.violated; break;
        case ClaimStatus::inconclusive: ++t.inconclusive; break;
      }
      report.counterexamples.push_back(Counterexample{scenario.name, outcome.claim, outcome.status, scenario.model,
                                                      scenario.k0, eval.theta, eval.theta_transposed,
                                                      eval.power.index_form, eval.condition.holds});
    }
  };

  if (config.include_bundled)
    for (const auto& scenario : bundled_scenarios()) run(scenario);
  for (std::size_t trial = 0; trial < config.trials; ++trial) run(draw_model(config, trial));

  for (auto& t : report.tallies) {
    t.status = t.violated > 0        ? ClaimStatus::violated
               : t.inconclusive > 0 ? ClaimStatus::inconclusive
                                    : ClaimStatus::confirmed;
  }
  return report;
}

}  // namespace qbat
