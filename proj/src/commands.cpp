#include "qbat/commands.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qbat/errors.hpp"
#include "qbat/free_energy.hpp"
#include "qbat/report.hpp"

namespace qbat {

using nlohmann::json;

namespace {

DensityMatrix initial_density(const RunConfig& cfg, const LindbladModel& model) {
  const InitialState& init = cfg.initial_state;
  DensityMatrix rho = [&] {
    switch (init.kind) {
      case InitialState::Kind::eigenstate: {
        const Spectrum s = hermitian_eig(model.hamiltonian(), cfg.tolerances);
        return DensityMatrix::pure(s.eigenvector(init.k0));
      }
      case InitialState::Kind::matrix:
        return DensityMatrix(HermitianMatrix(*init.matrix), cfg.tolerances);
      case InitialState::Kind::thermal:
        break;
    }
    return DensityMatrix::thermal(model.hamiltonian(), init.beta, cfg.tolerances);
  }();
  return init.epsilon ? regularize(rho, *init.epsilon) : rho;
}

void write_rows(const Trajectory& traj, const BatteryContext& ctx, const ToleranceConfig& tol, std::ostream& csv) {
  const LindbladModel& model = ctx.model();
  const std::size_t n = traj.size();
  for (std::size_t i = 0; i < n; ++i) {
    const DensityMatrix& rho = traj.states[i];
    csv << format_double(traj.times[i]) << ',' << format_double(trace_product(rho, model.hamiltonian()).real())
        << ',' << format_double(von_neumann_entropy(rho)) << ',' << format_double(mean_free_energy(rho, ctx)) << ',';

    std::optional<FreeEnergyDecomposition> decomp;
    try {
      decomp = free_energy_operator(rho, ctx, tol);
    } catch (const RankDeficientError&) {
    }
    if (decomp) csv << format_double(trace_product(liouvillian(model, rho), decomp->f_op).real());
    csv << ',';
    if (i > 0 && i + 1 < n) csv << format_double(power_fd(traj, ctx, i));
    for (const auto& ch : model.channels()) {
      csv << ',';
      if (decomp) csv << format_double(theta_operator_form(*decomp, rho, ch.op, tol));
    }
    csv << ',' << format_double(traj.diagnostics[i].trace_defect) << ','
        << format_double(traj.diagnostics[i].min_eigenvalue) << '\n';
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void run_command(const RunConfig& cfg, std::ostream& csv) {
  const LindbladModel model = cfg.model();
  const BatteryContext ctx(cfg.beta, model, cfg.tolerances.rank_threshold);
  const DensityMatrix rho0 = initial_density(cfg, model);
  const std::vector<double> grid = uniform_grid(cfg.time.t0, cfg.time.horizon, cfg.time.step);

  csv << "t,energy,entropy,free_energy,power_analytic,power_fd";
  for (std::size_t j = 1; j <= model.channels().size(); ++j) csv << ",theta_" << j;
  csv << ",trace_defect,min_eig\n";

  try {
    write_rows(propagate(model, rho0, grid, cfg.tolerances), ctx, cfg.tolerances, csv);
  } catch (const PropagationError& e) {
    write_rows(e.partial(), ctx, cfg.tolerances, csv);
    csv.flush();
    throw;
  }
}

json audit_command(const RunConfig& cfg) {
  json result;
  switch (cfg.mode) {
    case Mode::audit:
      result = to_json(eigenstate_audit(cfg.scenario(), cfg.tolerances));
      break;
    case Mode::sweep: {
      const ScenarioSpec spec = cfg.scenario();
      result = to_json(epsilon_sweep(spec, cfg.tolerances));
      result["scenario"] = spec.name;
      result["k0"] = spec.k0;
      break;
    }
    case Mode::check:
      result = to_json(claim_falsifier(cfg.ensemble(), cfg.tolerances));
      break;
    case Mode::run:
      throw ConfigError("mode", "run produces a CSV time series, not a report");
  }
  return {{"tool", kToolName},    {"version", kToolVersion},      {"mode", to_string(cfg.mode)},
          {"seed", cfg.seed},     {"config", cfg.source},         {"tolerances", to_json(cfg.tolerances)},
          {"result", result}};
}

int execute(const Invocation& inv, std::ostream& err) {
  std::ofstream out;
  try {
    ToleranceConfig tol;
    for (const auto& [key, value] : inv.tolerance_overrides) {
      try {
        tol.set(key, value);
      } catch (const ParameterError& e) {
        throw ConfigError("--tol", e.what());
      }
    }

    std::ifstream in(inv.config_path);
    if (!in) throw ConfigError("--config", "cannot open " + inv.config_path);
    std::stringstream text;
    text << in.rdbuf();
    RunConfig cfg = parse_config(text.str(), tol);
    cfg.mode = inv.mode;
    cfg.out_path = inv.out_path;
    if (inv.seed) cfg.seed = *inv.seed;

    out.open(inv.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("--out", "cannot open " + inv.out_path + " for writing");

    if (cfg.mode == Mode::run) {
      run_command(cfg, out);
    } else {
      out << audit_command(cfg).dump(2) << '\n';
    }
    out.flush();
    if (!out) {
      err << "error: failed writing " << inv.out_path << '\n';
      return kExitNumeric;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace qbat
