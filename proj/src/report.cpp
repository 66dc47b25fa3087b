#include "qbat/report.hpp"

#include "qbat/config.hpp"

namespace qbat {

using nlohmann::json;

namespace {

json witness_json(const Witness& w) {
  return {{"source", w.source},
          {"k0", w.k0},
          {"theta_values", w.theta},
          {"theta_values_transposed", w.theta_transposed},
          {"power", w.power},
          {"vanishing_condition", w.condition}};
}

}  // namespace

json to_json(const VanishingCondition& c) {
  json trivial = json::array();
  for (bool t : c.channel_trivial) trivial.push_back(t);
  return {{"holds", c.holds},
          {"hamiltonian_is_projector", c.hamiltonian_is_projector},
          {"channels_act_trivially", c.channels_act_trivially},
          {"channel_trivial", trivial},
          {"theta_values", c.theta_values},
          {"explanation", c.explanation}};
}

json to_json(const EpsilonSweep& sweep) {
  json rows = json::array();
  for (const auto& r : sweep.rows) {
    json row = {{"epsilon", r.epsilon},
                {"power_numeric", r.power_numeric},
                {"energy_rate", r.energy_rate},
                {"entropy_rate", r.entropy_rate},
                {"energy_rate_step", r.energy_rate_step}};
    row["error"] = r.error ? json(*r.error) : json(nullptr);
    rows.push_back(std::move(row));
  }
  json out = {{"epsilon_table", rows},
              {"reference_power", sweep.reference_power},
              {"convergence_constant", sweep.convergence_constant}};
  out["entropy_rate_fit"] = sweep.entropy_fit ? json{{"a", sweep.entropy_fit->a}, {"b", sweep.entropy_fit->b}}
                                              : json(nullptr);
  return out;
}

json to_json(const AuditReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.claim_verdicts) {
    json item = {{"claim", v.claim}, {"status", to_string(v.status)}};
    item["witness"] = v.witness ? witness_json(*v.witness) : json(nullptr);
    verdicts.push_back(std::move(item));
  }
  json out = {{"scenario", r.scenario},
              {"k0", r.k0},
              {"energy", r.energy},
              {"theta_values", r.theta_values},
              {"theta_values_transposed", r.theta_transposed},
              {"power", r.power_eq7},
              {"power_eq7", r.power_eq7},
              {"power_trace", r.power_trace},
              {"numeric_energy_rate", r.numeric_energy_rate},
              {"claim_scale", r.claim_scale},
              {"verdict", r.headline},
              {"vanishing_condition", to_json(r.vanishing)},
              {"claim_verdicts", verdicts}};
  json sweep = to_json(r.sweep);
  for (auto& item : sweep.items()) out[item.key()] = item.value();
  return out;
}

json to_json(const FalsifierReport& r) {
  json tallies = json::array();
  for (const auto& t : r.tallies) {
    tallies.push_back({{"claim", t.claim},
                       {"status", to_string(t.status)},
                       {"evaluated", t.evaluated},
                       {"confirmed", t.confirmed},
                       {"vacuous", t.vacuous},
                       {"violated", t.violated},
                       {"inconclusive", t.inconclusive}});
  }
  json examples = json::array();
  for (const auto& c : r.counterexamples) {
    examples.push_back({{"source", c.source},
                        {"claim", c.claim},
                        {"status", to_string(c.status)},
                        {"k0", c.k0},
                        {"theta_values", c.theta},
                        {"theta_values_transposed", c.theta_transposed},
                        {"power", c.power},
                        {"vanishing_condition", c.condition},
                        {"model", model_to_json(c.model)}});
  }
  return {{"ensemble",
           {{"seed", r.config.seed},
            {"dim_min", r.config.dim_min},
            {"dim_max", r.config.dim_max},
            {"trials", r.config.trials},
            {"sparsity", r.config.sparsity},
            {"include_bundled", r.config.include_bundled}}},
          {"scenarios_evaluated", r.scenarios_evaluated},
          {"claim_verdicts", tallies},
          {"counterexamples", examples}};
}

json to_json(const ToleranceConfig& tol) {
  json out = json::object();
  for (const auto& [key, value] : tol.entries()) out[key] = value;
  return out;
}

}  // namespace qbat
