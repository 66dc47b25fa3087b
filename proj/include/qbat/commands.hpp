#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qbat/config.hpp"

namespace qbat {

inline constexpr const char* kToolName = "qbat";
inline constexpr const char* kToolVersion = "1.0.0";

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Propagates the configured initial state and writes the time-series CSV.
///
/// Columns: t,energy,entropy,free_energy,power_analytic,power_fd,
/// theta_1..theta_m,trace_defect,min_eig. Values use 17 significant digits;
/// power_fd is blank at the endpoints and the F-dependent columns are blank
/// for rank-deficient states. On PropagationError the rows computed so far
/// are written and the error is rethrown.
void run_command(const RunConfig& cfg, std::ostream& csv);

/// Report document for audit, sweep and check modes.
nlohmann::json audit_command(const RunConfig& cfg);

/// Formats a double with 17 significant digits, locale independent.
std::string format_double(double value);

struct Invocation {
  Mode mode = Mode::run;
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, double>> tolerance_overrides;
};

/// Loads the config, dispatches the command and writes the output file.
/// Returns the process exit code; diagnostics go to `err`.
int execute(const Invocation& inv, std::ostream& err);

}  // namespace qbat
