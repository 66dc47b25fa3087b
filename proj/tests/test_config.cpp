#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qbat/commands.hpp"
#include "qbat/config.hpp"
#include "qbat/errors.hpp"

using namespace qbat;
using nlohmann::json;

namespace {

const char* kQubit = R"({
  "dim": 2,
  "beta": 2.0,
  "hamiltonian": [[0, 0], [0, 1]],
  "channels": [{"rate": 0.5, "matrix": [[0, [1, 0]], [0, 0]]}],
  "initial_state": {"kind": "eigenstate", "k0": 1},
  "time": {"t0": 0, "horizon": 0.5, "step": 0.01}
})";

std::string config_error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

json edited(const std::string& base, const std::function<void(json&)>& edit) {
  json doc = json::parse(base);
  edit(doc);
  return doc;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

std::string run_csv(const RunConfig& cfg) {
  std::ostringstream out;
  run_command(cfg, out);
  return out.str();
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "qbat_test_config";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = temp_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QBAT_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal qubit config parses") {
  const auto cfg = parse_config(kQubit);
  CHECK(cfg.dim == 2u);
  CHECK(cfg.beta == 2.0);
  REQUIRE(cfg.channels.size() == 1);
  CHECK(cfg.channels[0].rate == 0.5);
  CHECK(cfg.channels[0].matrix(0, 1) == Complex(1.0));
  CHECK(cfg.initial_state.kind == InitialState::Kind::eigenstate);
  CHECK(cfg.initial_state.k0 == 1u);
  CHECK(cfg.time.step == 0.01);
  CHECK(cfg.epsilons.size() == 7);
  CHECK(cfg.seed == 42u);
  const auto model = cfg.model();
  CHECK(model.dim() == 2);
  const auto spec = cfg.scenario();
  CHECK(spec.k0 == 1u);
  CHECK(spec.beta == 2.0);
}

TEST_CASE("validation errors name their JSON path") {
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["channels"][0]["rate"] = -1; }).dump()) == "channels[0].rate");
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["initial_state"]["k0"] = 5; }).dump()) == "initial_state.k0");
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["colour"] = "red"; }).dump()) == "colour");
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["time"]["stpe"] = 1; }).dump()) == "time.stpe");
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["beta"] = 0; }).dump()) == "beta");
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["hamiltonian"] = {{0, 1}, {0, 1}}; }).dump()) ==
        "hamiltonian");
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["hamiltonian"] = {{0, 0, 0}, {0, 1, 0}}; }).dump())
            .rfind("hamiltonian", 0) == 0);
  CHECK(config_error_path(edited(kQubit, [](json& d) { d["channels"][0]["matrix"][0][1] = {1, 2, 3}; }).dump())
            .rfind("channels[0].matrix", 0) == 0);
  CHECK(config_error_path("{not json") == "$");
}

TEST_CASE("non-Hermitian Hamiltonian is rejected with its defect") {
  try {
    parse_config(edited(kQubit, [](json& d) { d["hamiltonian"] = {{0, 0.5}, {0, 1}}; }).dump());
    FAIL("accepted a non-Hermitian Hamiltonian");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("canonical serialization round-trips") {
  for (const char* name : {"qubit_sigma_x", "qubit_dark_state", "qutrit_ladder", "qubit_decay", "thermal_stationary", "check"}) {
    CAPTURE(name);
    const auto first = parse_config(slurp(std::string(QBAT_SCENARIO_DIR) + "/" + name + ".json"));
    const json canonical = serialize_config(first);
    const auto second = parse_config_document(canonical);
    CHECK(serialize_config(second) == canonical);
    CHECK(second.channels.size() == first.channels.size());
    if (first.hamiltonian) CHECK(*second.hamiltonian == *first.hamiltonian);
  }
}

TEST_CASE("model json round-trip is exact") {
  const auto model = parse_config(kQubit).model();
  const auto back = model_from_json(json::parse(model_to_json(model).dump()));
  CHECK(back.hamiltonian().matrix() == model.hamiltonian().matrix());
  CHECK(back.channels()[0].op == model.channels()[0].op);
  CHECK(back.channels()[0].rate == model.channels()[0].rate);
}

TEST_CASE("run CSV layout") {
  const auto rows = parse_csv(run_csv(parse_config(kQubit)));
  REQUIRE(rows.size() == 52);
  CHECK(rows[0] == std::vector<std::string>{"t", "energy", "entropy", "free_energy", "power_analytic", "power_fd",
                                            "theta_1", "trace_defect", "min_eig"});
  CHECK(rows[1][5].empty());
  CHECK(rows.back()[5].empty());
  // The pure initial state has a mean free energy but no free-energy operator.
  CHECK(rows[1][3] == "1");
  CHECK(rows[1][4].empty());
  CHECK(rows[1][6].empty());
  CHECK_FALSE(rows[2][4].empty());
  CHECK(std::stod(rows.back()[0]) == doctest::Approx(0.5));
}

TEST_CASE("run: decay energy follows exp(-gamma t)") {
  auto cfg = parse_config(kQubit);
  cfg.time.horizon = 2.0;
  cfg.time.step = 1e-3;
  const auto rows = parse_csv(run_csv(cfg));
  double worst = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double t = std::stod(rows[r][0]);
    worst = std::max(worst, std::abs(std::stod(rows[r][1]) - std::exp(-0.5 * t)));
    CHECK(std::stod(rows[r][7]) <= 1e-8);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("run: closed dynamics has zero power") {
  auto doc = json::parse(kQubit);
  doc["hamiltonian"] = {{0.3, {0.2, 0.4}}, {{0.2, -0.4}, 1.1}};
  doc["channels"] = json::array();
  doc["initial_state"] = {{"kind", "matrix"}, {"matrix", {{0.7, {0.1, 0.05}}, {{0.1, -0.05}, 0.3}}}};
  const auto rows = parse_csv(run_csv(parse_config_document(doc)));
  REQUIRE(rows[0].size() == 8);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(std::abs(std::stod(rows[r][4])) <= 1e-9);
    if (!rows[r][5].empty()) CHECK(std::abs(std::stod(rows[r][5])) <= 1e-9);
  }
}

TEST_CASE("run: thermal state is stationary") {
  const auto cfg = parse_config(slurp(std::string(QBAT_SCENARIO_DIR) + "/thermal_stationary.json"));
  const auto rows = parse_csv(run_csv(cfg));
  const double e0 = std::stod(rows[1][1]);
  const double f0 = std::stod(rows[1][3]);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(std::abs(std::stod(rows[r][1]) - e0) <= 1e-9);
    CHECK(std::abs(std::stod(rows[r][3]) - f0) <= 1e-9);
    CHECK(std::abs(std::stod(rows[r][4])) <= 1e-9);
  }
}

TEST_CASE("run output is byte-stable") {
  const auto cfg = parse_config(kQubit);
  CHECK(run_csv(cfg) == run_csv(cfg));
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("audit_command documents its inputs") {
  auto cfg = parse_config(slurp(std::string(QBAT_SCENARIO_DIR) + "/qubit_sigma_x.json"));
  cfg.mode = Mode::audit;
  const auto doc = audit_command(cfg);
  CHECK(doc["tool"] == "qbat");
  CHECK(doc["mode"] == "audit");
  CHECK(doc["config"] == cfg.source);
  CHECK(doc["tolerances"]["claim_zero"] == 1e-10);
  const auto& r = doc["result"];
  CHECK(r["verdict"] == "HYPOTHESIS_REFUTED");
  CHECK(r["power_eq7"] == 1.0);
  CHECK(r["power_trace"] == 1.0);
  CHECK(r["theta_values"] == json::array({1.0}));
  CHECK(r["epsilon_table"].size() == cfg.epsilons.size());

  cfg.mode = Mode::run;
  CHECK_THROWS_AS(audit_command(cfg), ConfigError);
}

TEST_CASE("audit on a non-eigenstate initial state is a scenario error") {
  auto doc = json::parse(kQubit);
  doc["initial_state"] = {{"kind", "thermal"}, {"beta", 1.0}};
  auto cfg = parse_config_document(doc);
  cfg.mode = Mode::audit;
  CHECK_THROWS_AS(audit_command(cfg), ScenarioError);
}

TEST_CASE("CLI exit codes") {
  const auto out = (temp_dir() / "out.json").string();
  const std::string scen = QBAT_SCENARIO_DIR;

  CHECK(cli("audit --config " + scen + "/qubit_sigma_x.json --out " + out) == 0);
  CHECK(json::parse(slurp(out))["result"]["verdict"] == "HYPOTHESIS_REFUTED");
  CHECK(cli("sweep --config " + scen + "/qubit_sigma_plus.json --out " + out) == 0);
  CHECK(cli("run --config " + scen + "/thermal_stationary.json --out " + out) == 0);

  const auto bad_rate = write_temp("bad_rate.json", edited(kQubit, [](json& d) { d["channels"][0]["rate"] = -1; }).dump());
  CHECK(cli("run --config " + bad_rate + " --out " + out) == 2);
  CHECK(cli("audit --config /nonexistent/file.json --out " + out) == 2);
  CHECK(cli("audit --out " + out) == 2);
  CHECK(cli("audit --config " + scen + "/qubit_sigma_x.json --out " + out + " --tol bogus=1") == 2);
  CHECK(cli("frobnicate") == 2);

  // A stiff channel with a coarse step drives RK4 out of the state space.
  const auto stiff = write_temp("stiff.json", edited(kQubit, [](json& d) {
                                                d["channels"][0]["rate"] = 1000.0;
                                                d["time"] = {{"t0", 0}, {"horizon", 1.0}, {"step", 0.1}};
                                              }).dump());
  CHECK(cli("run --config " + stiff + " --out " + out) == 3);
  // The partial trajectory is still written.
  CHECK(parse_csv(slurp(out)).size() >= 2);
}
