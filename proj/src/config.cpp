#include "qbat/config.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

#include "qbat/errors.hpp"
#include "qbat/free_energy.hpp"

namespace qbat {

using nlohmann::json;

namespace {

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string key_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(key_path(path, item.key()), "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::uint64_t get_unsigned(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError(path, "expected a nonnegative integer");
}

Complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {get_number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {get_number(j[0], index_path(path, 0)), get_number(j[1], index_path(path, 1))};
  throw ConfigError(path, "expected a number or an [re, im] pair");
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

HermitianMatrix checked_hamiltonian(const ComplexMatrix& m, const std::string& path, double tol) {
  const double defect = m.hermiticity_defect();
  if (defect > tol) throw ConfigError(path, "matrix is not Hermitian (max defect " + std::to_string(defect) + ")");
  return HermitianMatrix(m);
}

InitialState parse_initial_state(const json& j, std::size_t dim, const ToleranceConfig& tol) {
  const std::string path = "initial_state";
  reject_unknown_keys(j, path, {"kind", "k0", "matrix", "beta", "epsilon"});
  const json* kind = find(j, "kind");
  if (!kind || !kind->is_string()) throw ConfigError(key_path(path, "kind"), "expected \"eigenstate\", \"matrix\" or \"thermal\"");

  InitialState st;
  const auto name = kind->get<std::string>();
  auto forbid = [&](const char* key) {
    if (find(j, key)) throw ConfigError(key_path(path, key), "not allowed for kind " + name);
  };
  if (name == "eigenstate") {
    st.kind = InitialState::Kind::eigenstate;
    forbid("matrix");
    forbid("beta");
    if (const json* k0 = find(j, "k0")) st.k0 = get_unsigned(*k0, key_path(path, "k0"));
    if (st.k0 >= dim) throw ConfigError(key_path(path, "k0"), "index " + std::to_string(st.k0) + " out of range for dim " + std::to_string(dim));
  } else if (name == "matrix") {
    st.kind = InitialState::Kind::matrix;
    forbid("k0");
    forbid("beta");
    const json* m = find(j, "matrix");
    if (!m) throw ConfigError(key_path(path, "matrix"), "required for kind matrix");
    const ComplexMatrix raw = matrix_from_json(*m, dim, key_path(path, "matrix"));
    try {
      DensityMatrix(checked_hamiltonian(raw, key_path(path, "matrix"), tol.config_hermiticity), tol);
    } catch (const StateError& e) {
      throw ConfigError(key_path(path, "matrix"), e.what());
    }
    st.matrix = raw;
  } else if (name == "thermal") {
    st.kind = InitialState::Kind::thermal;
    forbid("k0");
    forbid("matrix");
    if (const json* b = find(j, "beta")) st.beta = get_number(*b, key_path(path, "beta"));
    if (!(st.beta > 0.0)) throw ConfigError(key_path(path, "beta"), "must be positive");
  } else {
    throw ConfigError(key_path(path, "kind"), "unknown kind \"" + name + "\"");
  }
  if (const json* e = find(j, "epsilon")) {
    st.epsilon = get_number(*e, key_path(path, "epsilon"));
    if (!(*st.epsilon > 0.0 && *st.epsilon < 1.0)) throw ConfigError(key_path(path, "epsilon"), "must lie in (0, 1)");
  }
  return st;
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::run: return "run";
    case Mode::audit: return "audit";
    case Mode::sweep: return "sweep";
    case Mode::check: return "check";
  }
  return "run";
}

Mode parse_mode(std::string_view name) {
  if (name == "run") return Mode::run;
  if (name == "audit") return Mode::audit;
  if (name == "sweep") return Mode::sweep;
  if (name == "check") return Mode::check;
  throw ConfigError("mode", "unknown mode " + std::string(name));
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != dim) throw ConfigError(path, "expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = j[r];
    const std::string row_path = index_path(path, r);
    if (!row.is_array() || row.size() != dim) throw ConfigError(row_path, "expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = get_complex(row[c], index_path(row_path, c));
  }
  return m;
}

json model_to_json(const LindbladModel& model) {
  json channels = json::array();
  for (const auto& ch : model.channels()) channels.push_back({{"rate", ch.rate}, {"matrix", matrix_to_json(ch.op)}});
  return {{"dim", model.dim()}, {"hamiltonian", matrix_to_json(model.hamiltonian())}, {"channels", channels}};
}

LindbladModel model_from_json(const json& j, const ToleranceConfig& tol) {
  reject_unknown_keys(j, "", {"dim", "hamiltonian", "channels"});
  return parse_config_document(j, tol).model();
}

RunConfig parse_config(std::string_view text, const ToleranceConfig& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config_document(doc, tol);
}

RunConfig parse_config_document(const json& doc, const ToleranceConfig& tol) {
  reject_unknown_keys(doc, "", {"name", "dim", "beta", "hamiltonian", "channels", "initial_state", "time", "epsilons",
                                "trials", "seed", "check"});
  RunConfig cfg;
  cfg.source = doc;
  cfg.tolerances = tol;

  if (const json* n = find(doc, "name")) {
    if (!n->is_string()) throw ConfigError("name", "expected a string");
    cfg.name = n->get<std::string>();
  }
  if (const json* d = find(doc, "dim")) {
    cfg.dim = get_unsigned(*d, "dim");
    if (*cfg.dim < 2 || *cfg.dim > 64) throw ConfigError("dim", "must lie in [2, 64]");
  }
  if (const json* b = find(doc, "beta")) {
    cfg.beta = get_number(*b, "beta");
    if (!(cfg.beta > 0.0)) throw ConfigError("beta", "must be positive");
  }

  const json* h = find(doc, "hamiltonian");
  const json* channels = find(doc, "channels");
  const json* init = find(doc, "initial_state");
  if ((h || channels || init) && !cfg.dim) throw ConfigError("dim", "required when a model is given");
  if (cfg.dim && !h) throw ConfigError("hamiltonian", "required when dim is given");
  if (h) {
    const ComplexMatrix m = matrix_from_json(*h, *cfg.dim, "hamiltonian");
    checked_hamiltonian(m, "hamiltonian", tol.config_hermiticity);
    cfg.hamiltonian = m;
  }
  if (channels) {
    if (!channels->is_array()) throw ConfigError("channels", "expected an array");
    for (std::size_t i = 0; i < channels->size(); ++i) {
      const std::string path = index_path("channels", i);
      const json& ch = (*channels)[i];
      reject_unknown_keys(ch, path, {"rate", "matrix"});
      const json* rate = find(ch, "rate");
      const json* matrix = find(ch, "matrix");
      if (!rate) throw ConfigError(key_path(path, "rate"), "required");
      if (!matrix) throw ConfigError(key_path(path, "matrix"), "required");
      const double r = get_number(*rate, key_path(path, "rate"));
      if (r < 0.0) throw ConfigError(key_path(path, "rate"), "must be nonnegative");
      cfg.channels.push_back({r, matrix_from_json(*matrix, *cfg.dim, key_path(path, "matrix"))});
    }
  }
  if (init) cfg.initial_state = parse_initial_state(*init, *cfg.dim, tol);

  if (const json* t = find(doc, "time")) {
    reject_unknown_keys(*t, "time", {"t0", "horizon", "step"});
    if (const json* v = find(*t, "t0")) cfg.time.t0 = get_number(*v, "time.t0");
    if (const json* v = find(*t, "horizon")) cfg.time.horizon = get_number(*v, "time.horizon");
    if (const json* v = find(*t, "step")) cfg.time.step = get_number(*v, "time.step");
    if (!(cfg.time.step > 0.0)) throw ConfigError("time.step", "must be positive");
    if (!(cfg.time.horizon >= cfg.time.step)) throw ConfigError("time.horizon", "must be at least one step");
  }
  if (const json* e = find(doc, "epsilons")) {
    if (!e->is_array() || e->empty()) throw ConfigError("epsilons", "expected a nonempty array");
    cfg.epsilons.clear();
    for (std::size_t i = 0; i < e->size(); ++i) {
      const std::string path = index_path("epsilons", i);
      const double v = get_number((*e)[i], path);
      if (!(v > 0.0 && v < 1.0)) throw ConfigError(path, "must lie in (0, 1)");
      if (i > 0 && !(v < cfg.epsilons.back())) throw ConfigError(path, "epsilons must be strictly descending");
      cfg.epsilons.push_back(v);
    }
  }
  if (const json* t = find(doc, "trials")) {
    cfg.trials = get_unsigned(*t, "trials");
    if (cfg.trials < 1) throw ConfigError("trials", "must be at least 1");
  }
  if (const json* s = find(doc, "seed")) cfg.seed = get_unsigned(*s, "seed");
  if (const json* c = find(doc, "check")) {
    reject_unknown_keys(*c, "check", {"dim_min", "dim_max", "sparsity", "include_bundled"});
    if (const json* v = find(*c, "dim_min")) cfg.check.dim_min = get_unsigned(*v, "check.dim_min");
    if (const json* v = find(*c, "dim_max")) cfg.check.dim_max = get_unsigned(*v, "check.dim_max");
    if (const json* v = find(*c, "sparsity")) cfg.check.sparsity = get_number(*v, "check.sparsity");
    if (const json* v = find(*c, "include_bundled")) {
      if (!v->is_boolean()) throw ConfigError("check.include_bundled", "expected a boolean");
      cfg.check.include_bundled = v->get<bool>();
    }
    if (cfg.check.dim_min < 2) throw ConfigError("check.dim_min", "must be at least 2");
    if (cfg.check.dim_max < cfg.check.dim_min || cfg.check.dim_max > 64) {
      throw ConfigError("check.dim_max", "must lie in [dim_min, 64]");
    }
    if (!(cfg.check.sparsity >= 0.0 && cfg.check.sparsity < 1.0)) throw ConfigError("check.sparsity", "must lie in [0, 1)");
  }
  return cfg;
}

json serialize_config(const RunConfig& cfg) {
  json out;
  out["name"] = cfg.name;
  out["beta"] = cfg.beta;
  if (cfg.dim) out["dim"] = *cfg.dim;
  if (cfg.hamiltonian) {
    out["hamiltonian"] = matrix_to_json(*cfg.hamiltonian);
    json channels = json::array();
    for (const auto& ch : cfg.channels) channels.push_back({{"rate", ch.rate}, {"matrix", matrix_to_json(ch.matrix)}});
    out["channels"] = channels;

    json init;
    switch (cfg.initial_state.kind) {
      case InitialState::Kind::eigenstate:
        init = {{"kind", "eigenstate"}, {"k0", cfg.initial_state.k0}};
        break;
      case InitialState::Kind::matrix:
        init = {{"kind", "matrix"}, {"matrix", matrix_to_json(*cfg.initial_state.matrix)}};
        break;
      case InitialState::Kind::thermal:
        init = {{"kind", "thermal"}, {"beta", cfg.initial_state.beta}};
        break;
    }
    if (cfg.initial_state.epsilon) init["epsilon"] = *cfg.initial_state.epsilon;
    out["initial_state"] = init;
  }
  out["time"] = {{"t0", cfg.time.t0}, {"horizon", cfg.time.horizon}, {"step", cfg.time.step}};
  out["epsilons"] = cfg.epsilons;
  out["trials"] = cfg.trials;
  out["seed"] = cfg.seed;
  out["check"] = {{"dim_min", cfg.check.dim_min},
                  {"dim_max", cfg.check.dim_max},
                  {"sparsity", cfg.check.sparsity},
                  {"include_bundled", cfg.check.include_bundled}};
  return out;
}

LindbladModel RunConfig::model() const {
  if (!hamiltonian) throw ConfigError("hamiltonian", "required for mode " + std::string(to_string(mode)));
  std::vector<JumpChannel> jumps;
  for (const auto& ch : channels) jumps.push_back({ch.rate, ch.matrix});
  return LindbladModel(HermitianMatrix(*hamiltonian), std::move(jumps));
}

ScenarioSpec RunConfig::scenario() const {
  LindbladModel m = model();
  std::size_t k0 = 0;
  switch (initial_state.kind) {
    case InitialState::Kind::eigenstate:
      k0 = initial_state.k0;
      break;
    case InitialState::Kind::matrix: {
      // Accept a rank-one projector onto one of the H eigenvectors.
      const Spectrum s = hermitian_eig(m.hamiltonian(), tolerances);
      const ComplexMatrix in_basis = to_basis(s.eigenvectors, *initial_state.matrix);
      bool found = false;
      for (std::size_t k = 0; k < m.dim() && !found; ++k) {
        const ComplexMatrix target = ComplexMatrix::unit(m.dim(), k, k);
        if (max_abs_diff(in_basis, target) <= tolerances.eigenvector_residual) {
          k0 = k;
          found = true;
        }
      }
      if (!found) throw ScenarioError("initial_state.matrix is not an eigenstate projector of the Hamiltonian");
      break;
    }
    case InitialState::Kind::thermal:
      throw ScenarioError("audit and sweep need an eigenstate initial state, not a thermal one");
  }
  ScenarioSpec spec{name, std::move(m), beta, k0, epsilons, time.step, time.horizon, seed};
  spec.validate();
  return spec;
}

EnsembleConfig RunConfig::ensemble() const {
  return EnsembleConfig{seed, check.dim_min, check.dim_max, trials, check.sparsity, check.include_bundled};
}

}  // namespace qbat
