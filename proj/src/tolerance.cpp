#include "qbat/tolerance.hpp"

#include <cmath>

#include "qbat/errors.hpp"

namespace qbat {

void ToleranceConfig::set(const std::string& key, double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ParameterError("tolerance " + key + " must be a positive finite number");
  }
  if (key == "jacobi_max_sweeps") {
    jacobi_max_sweeps = static_cast<int>(value);
    return;
  }
  for (auto& [name, field] : std::initializer_list<std::pair<const char*, double*>>{
           {"jacobi_relative", &jacobi_relative},
           {"state_trace", &state_trace},
           {"state_psd", &state_psd},
           {"propagation_trace", &propagation_trace},
           {"propagation_psd", &propagation_psd},
           {"rank_threshold", &rank_threshold},
           {"mean_consistency", &mean_consistency},
           {"power_consistency", &power_consistency},
           {"theta_consistency", &theta_consistency},
           {"imaginary_residual", &imaginary_residual},
           {"eigenvector_residual", &eigenvector_residual},
           {"config_hermiticity", &config_hermiticity},
           {"claim_zero", &claim_zero}}) {
    if (key == name) {
      *field = value;
      return;
    }
  }
  throw ParameterError("unknown tolerance key: " + key);
}

std::vector<std::pair<std::string, double>> ToleranceConfig::entries() const {
  return {{"jacobi_relative", jacobi_relative},
          {"jacobi_max_sweeps", static_cast<double>(jacobi_max_sweeps)},
          {"state_trace", state_trace},
          {"state_psd", state_psd},
          {"propagation_trace", propagation_trace},
          {"propagation_psd", propagation_psd},
          {"rank_threshold", rank_threshold},
          {"mean_consistency", mean_consistency},
          {"power_consistency", power_consistency},
          {"theta_consistency", theta_consistency},
          {"imaginary_residual", imaginary_residual},
          {"eigenvector_residual", eigenvector_residual},
          {"config_hermiticity", config_hermiticity},
          {"claim_zero", claim_zero}};
}

}  // namespace qbat
