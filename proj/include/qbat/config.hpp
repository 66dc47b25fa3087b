#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qbat/audit.hpp"
#include "qbat/matrix.hpp"
#include "qbat/open_system.hpp"
#include "qbat/tolerance.hpp"

namespace qbat {

enum class Mode { run, audit, sweep, check };
const char* to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct InitialState {
  enum class Kind { eigenstate, matrix, thermal };
  Kind kind = Kind::eigenstate;
  std::size_t k0 = 0;                   // eigenstate: index into the ascending H eigenbasis
  std::optional<ComplexMatrix> matrix;  // matrix
  double beta = 1.0;                    // thermal
  std::optional<double> epsilon;        // optional mixing with I/d before use
};

struct TimeSettings {
  double t0 = 0.0;
  double horizon = 1.0;
  double step = 1e-3;
};

struct CheckSettings {
  std::size_t dim_min = 2;
  std::size_t dim_max = 6;
  double sparsity = 0.0;
  bool include_bundled = true;
};

struct ChannelSpec {
  double rate;
  ComplexMatrix matrix;
};

/// Parsed run configuration. JSON-backed fields come first; mode, output
/// path and tolerances are supplied by the command line.
struct RunConfig {
  std::string name;
  std::optional<std::size_t> dim;
  double beta = 1.0;
  std::optional<ComplexMatrix> hamiltonian;
  std::vector<ChannelSpec> channels;
  InitialState initial_state;
  TimeSettings time;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  CheckSettings check;

  Mode mode = Mode::run;
  std::string out_path;
  ToleranceConfig tolerances;
  nlohmann::json source;  // the document as read

  /// Throws ConfigError when the config has no Hamiltonian.
  LindbladModel model() const;
  /// Resolves the initial state to an eigenvector index of H for audit and
  /// sweep; throws ScenarioError when the state is not an H eigenstate.
  ScenarioSpec scenario() const;
  EnsembleConfig ensemble() const;
};

/// Strict schema validation: unknown keys are rejected and every failure
/// names its JSON path. Complex entries are numbers or [re, im] pairs;
/// matrices are row-major nested arrays.
RunConfig parse_config_document(const nlohmann::json& doc, const ToleranceConfig& tol = {});
RunConfig parse_config(std::string_view text, const ToleranceConfig& tol = {});

/// Canonical form: every field present, complex entries as [re, im].
nlohmann::json serialize_config(const RunConfig& cfg);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t dim, const std::string& path);

/// {"dim", "hamiltonian", "channels"} of a model.
nlohmann::json model_to_json(const LindbladModel& model);
LindbladModel model_from_json(const nlohmann::json& j, const ToleranceConfig& tol = {});

}  // namespace qbat
