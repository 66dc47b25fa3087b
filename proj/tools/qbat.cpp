#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbat/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum battery free-energy diagnostics for Lindblad dynamics"};
  app.set_version_flag("--version", qbat::kToolVersion);
  app.require_subcommand(1);

  qbat::Invocation inv;
  std::vector<std::string> tolerances;
  std::uint64_t seed = 0;

  const std::pair<qbat::Mode, const char*> modes[] = {
      {qbat::Mode::run, "Propagate the initial state and write a CSV time series"},
      {qbat::Mode::audit, "Audit an eigenstate scenario and write a JSON report"},
      {qbat::Mode::sweep, "Run the regularization sweep for an eigenstate scenario"},
      {qbat::Mode::check, "Search a random model ensemble for claim counterexamples"}};
  for (const auto& [mode, description] : modes) {
    CLI::App* sub = app.add_subcommand(qbat::to_string(mode), description);
    sub->add_option("--config", inv.config_path, "JSON configuration file")->required();
    sub->add_option("--out", inv.out_path, "Output file")->required();
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--tol", tolerances, "Tolerance override KEY=VALUE (repeatable)");
    sub->callback([&inv, mode = mode] { inv.mode = mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : qbat::kExitConfig;
  }

  for (const auto* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) inv.seed = seed;
  }
  for (const auto& item : tolerances) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "config error: --tol expects KEY=VALUE, got " << item << '\n';
      return qbat::kExitConfig;
    }
    try {
      inv.tolerance_overrides.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
    } catch (const std::exception&) {
      std::cerr << "config error: --tol value is not a number: " << item << '\n';
      return qbat::kExitConfig;
    }
  }
  return qbat::execute(inv, std::cerr);
}
