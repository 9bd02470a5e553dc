// config.cpp — strict parsing and validation of experiment configs

#include "topamp/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace topamp::cli {

namespace {

using nlohmann::json;

struct Problems {
  std::vector<std::string> list;

  void add(const std::string& path, const std::string& message) {
    list.push_back(path + ": " + message);
  }
  void raise_if_any() {
    if (!list.empty()) throw ConfigError(std::move(list));
  }
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, Problems& problems) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) problems.add(path + "." + it.key(), "unknown key");
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  Problems& problems, std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    problems.add(path + "." + key, "missing required key");
    return 0.0;
  }
  if (!obj[key].is_number()) {
    problems.add(path + "." + key, "expected a number");
    return fallback.value_or(0.0);
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key,
            Problems& problems, std::optional<int> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    problems.add(path + "." + key, "missing required key");
    return 0;
  }
  if (!obj[key].is_number_integer()) {
    problems.add(path + "." + key, "expected an integer");
    return fallback.value_or(0);
  }
  return obj[key].get<int>();
}

std::vector<double> get_number_list(const json& obj, const std::string& path,
                                    const std::string& key, Problems& problems,
                                    std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array() || obj[key].empty()) {
    problems.add(path + "." + key, "expected a non-empty array of numbers");
    return fallback;
  }
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      problems.add(path + "." + key, "expected numbers only");
      return fallback;
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& obj, const std::string& path, const std::string& key,
                              Problems& problems, std::vector<int> fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array() || obj[key].empty()) {
    problems.add(path + "." + key, "expected a non-empty array of integers");
    return fallback;
  }
  std::vector<int> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number_integer()) {
      problems.add(path + "." + key, "expected integers only");
      return fallback;
    }
    out.push_back(v.get<int>());
  }
  return out;
}

CMatrix parse_complex_matrix(const json& node, const std::string& path, int n,
                             Problems& problems) {
  CMatrix out = CMatrix::Zero(n, n);
  if (!node.is_object()) {
    problems.add(path, "expected an object with \"re\" (and optional \"im\") matrices");
    return out;
  }
  check_keys(node, path, {"re", "im"}, problems);
  for (const char* part : {"re", "im"}) {
    if (!node.contains(part)) {
      if (std::string(part) == "re") problems.add(path + ".re", "missing required key");
      continue;
    }
    const json& rows = node[part];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      problems.add(path + "." + part, "expected " + std::to_string(n) + " rows");
      continue;
    }
    for (int r = 0; r < n; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) {
        problems.add(path + "." + part, "row " + std::to_string(r) + " must have " +
                                            std::to_string(n) + " entries");
        break;
      }
      for (int c = 0; c < n; ++c) {
        if (!rows[r][c].is_number()) {
          problems.add(path + "." + part, "non-numeric entry");
          break;
        }
        const double v = rows[r][c].get<double>();
        out(r, c) += (std::string(part) == "re") ? Complex{v, 0.0} : Complex{0.0, v};
      }
    }
  }
  return out;
}

void parse_model(const json& node, ModelBlock& model, Problems& problems) {
  if (!node.is_object()) {
    problems.add("model", "expected an object");
    return;
  }
  check_keys(node, "model", {"chain", "matrices"}, problems);
  const bool has_chain = node.contains("chain");
  const bool has_matrices = node.contains("matrices");
  if (has_chain == has_matrices) {
    problems.add("model", "exactly one of \"chain\" or \"matrices\" is required");
    return;
  }

  if (has_chain) {
    const json& c = node["chain"];
    if (!c.is_object()) {
      problems.add("model.chain", "expected an object");
      return;
    }
    check_keys(c, "model.chain",
               {"t_c", "t_d", "phi", "gamma_p", "omega0", "n_sites", "boundary"}, problems);
    model.is_chain = true;
    const size_t problems_before_fields = problems.list.size();
    model.chain.t_c = get_number(c, "model.chain", "t_c", problems);
    model.chain.t_d = get_number(c, "model.chain", "t_d", problems);
    model.chain.phi = get_number(c, "model.chain", "phi", problems);
    model.chain.gamma_p = get_number(c, "model.chain", "gamma_p", problems);
    model.chain.omega0 = get_number(c, "model.chain", "omega0", problems, 0.0);
    model.chain.n_sites = get_int(c, "model.chain", "n_sites", problems);
    if (c.contains("boundary")) {
      const std::string b = c["boundary"].is_string() ? c["boundary"].get<std::string>() : "";
      if (b == "open")
        model.boundary = model::Boundary::open;
      else if (b == "periodic")
        model.boundary = model::Boundary::periodic;
      else
        problems.add("model.chain.boundary", "expected \"open\" or \"periodic\"");
    }
    if (problems.list.size() == problems_before_fields) {
      // fields all parsed; value constraints are checked even when unrelated
      // problems (unknown keys elsewhere) were already recorded
      if (!(model.chain.t_c > 0.0)) problems.add("model.chain.t_c", "must be > 0");
      if (!(model.chain.t_d > 0.0)) problems.add("model.chain.t_d", "must be > 0");
      if (!(model.chain.gamma_p >= 0.0 && model.chain.gamma_p < 4.0 * model.chain.t_d))
        problems.add("model.chain.gamma_p",
                     "must satisfy 0 <= gamma_p < 4 t_d (kappa = 8 t_d - 2 gamma_p > 0)");
      if (model.chain.n_sites < 1) problems.add("model.chain.n_sites", "must be >= 1");
    }
    return;
  }

  const json& m = node["matrices"];
  if (!m.is_object()) {
    problems.add("model.matrices", "expected an object");
    return;
  }
  check_keys(m, "model.matrices", {"omega", "kappa", "coupling_g", "pump", "loss"}, problems);
  model.is_chain = false;
  const auto omega = get_number_list(m, "model.matrices", "omega", problems, {});
  const auto kappa = get_number_list(m, "model.matrices", "kappa", problems, {});
  if (omega.empty() || kappa.size() != omega.size()) {
    problems.add("model.matrices", "omega and kappa must be equal-length non-empty arrays");
    return;
  }
  const int n = static_cast<int>(omega.size());
  model.matrices.n_sites = n;
  model.matrices.omega = Eigen::Map<const RVector>(omega.data(), n);
  model.matrices.kappa = Eigen::Map<const RVector>(kappa.data(), n);
  model.matrices.coupling_g = m.contains("coupling_g")
                                  ? parse_complex_matrix(m["coupling_g"],
                                                         "model.matrices.coupling_g", n, problems)
                                  : CMatrix::Zero(n, n);
  model.matrices.pump =
      m.contains("pump") ? parse_complex_matrix(m["pump"], "model.matrices.pump", n, problems)
                         : CMatrix::Zero(n, n);
  model.matrices.loss =
      m.contains("loss") ? parse_complex_matrix(m["loss"], "model.matrices.loss", n, problems)
                         : CMatrix::Zero(n, n);
  if (problems.list.empty()) {
    const auto report = model::validate_spec(model.matrices);
    for (const auto& v : report.violations)
      problems.add("model.matrices." + v.field, v.invariant);
  }
}

const std::set<std::string>& kind_keys(const std::string& kind) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"gain-sweep",
       {"kind", "gamma_p_list", "n_list", "omega_points", "omega_span", "input_site"}},
      {"phase-map",
       {"kind", "omega_min", "omega_max", "omega_points", "gamma_p_min", "gamma_p_max",
        "gamma_p_points", "n_sites"}},
      {"noise-profile", {"kind", "rel_tol", "sites"}},
      {"added-noise", {"kind", "gamma_p_list", "site", "omega_points", "omega_span"}},
      {"nsr", {"kind", "amplitude_sq", "rel_tol", "sites", "omega_d"}},
      {"stability", {"kind", "gamma_p_list", "boundary"}},
      {"steady-state", {"kind", "rel_tol"}},
      {"disorder", {"kind", "w_list", "n_list", "instances", "fit_range"}},
      {"classify", {"kind", "phi_list", "omega_list"}},
  };
  static const std::set<std::string> empty;
  const auto it = keys.find(kind);
  return it == keys.end() ? empty : it->second;
}

}  // namespace

std::string ConfigError::join(const std::vector<std::string>& problems) {
  std::ostringstream out;
  out << "invalid config (" << problems.size() << " problem"
      << (problems.size() == 1 ? "" : "s") << ")";
  for (const auto& p : problems) out << "\n  - " << p;
  return out.str();
}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "gain-sweep", "phase-map", "noise-profile", "added-noise", "nsr",
      "stability",  "steady-state", "disorder",   "classify"};
  return kinds;
}

ExperimentConfig parse_config(const std::string& text) {
  Problems problems;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    problems.add("$", std::string("not valid JSON: ") + e.what());
    problems.raise_if_any();
  }
  if (!root.is_object()) {
    problems.add("$", "top level must be an object");
    problems.raise_if_any();
  }
  check_keys(root, "$", {"model", "experiment", "output", "seed"}, problems);

  ExperimentConfig config;
  if (!root.contains("model"))
    problems.add("model", "missing required key");
  else
    parse_model(root["model"], config.model, problems);

  if (!root.contains("experiment") || !root["experiment"].is_object()) {
    problems.add("experiment", "missing required object");
    problems.raise_if_any();
  }
  const json& exp = root["experiment"];
  if (!exp.contains("kind") || !exp["kind"].is_string()) {
    problems.add("experiment.kind", "missing required string");
    problems.raise_if_any();
  }
  config.kind = exp["kind"].get<std::string>();
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), config.kind) == kinds.end()) {
    std::string known;
    for (const auto& k : kinds) known += (known.empty() ? "" : ", ") + k;
    problems.add("experiment.kind", "unknown kind (known: " + known + ")");
    problems.raise_if_any();
  }
  check_keys(exp, "experiment", kind_keys(config.kind), problems);
  config.experiment = exp;

  // Kind-specific sanity that does not depend on the model block.
  if (config.kind == "disorder") {
    const auto w_list = get_number_list(exp, "experiment", "w_list", problems, {0.0});
    for (double w : w_list)
      if (!(w >= 0.0)) problems.add("experiment.w_list", "disorder strengths must be >= 0");
    const int instances = get_int(exp, "experiment", "instances", problems, 500);
    if (instances < 1) problems.add("experiment.instances", "must be >= 1");
    for (const char* key : {"n_list", "fit_range"})
      for (int n : get_int_list(exp, "experiment", key, problems, {2}))
        if (n < 2) problems.add(std::string("experiment.") + key, "sizes must be >= 2");
  }
  for (const char* key : {"rel_tol", "amplitude_sq", "omega_span"}) {
    if (exp.contains(key)) {
      const double v = get_number(exp, "experiment", key, problems, 0.0);
      if (!(v > 0.0)) problems.add(std::string("experiment.") + key, "must be > 0");
    }
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    if (!out.is_object()) {
      problems.add("output", "expected an object");
    } else {
      check_keys(out, "output", {"dir", "formats"}, problems);
      if (out.contains("dir")) {
        if (!out["dir"].is_string())
          problems.add("output.dir", "expected a string");
        else
          config.output.dir = out["dir"].get<std::string>();
      }
      if (out.contains("formats")) {
        if (!out["formats"].is_array()) {
          problems.add("output.formats", "expected an array");
        } else {
          config.output.formats.clear();
          for (const auto& f : out["formats"]) {
            if (!f.is_string() || f.get<std::string>() != "csv")
              problems.add("output.formats", "only \"csv\" is supported");
            else
              config.output.formats.push_back("csv");
          }
        }
      }
    }
  }

  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
      problems.add("seed", "expected an unsigned integer");
    else
      config.seed = root["seed"].get<std::uint64_t>();
  }

  problems.raise_if_any();
  config.canonical = root;  // nlohmann objects iterate sorted: canonical by construction
  return config;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string dump = config.canonical.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string config_schema() {
  static const char* schema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "topamp experiment configuration",
  "type": "object",
  "required": ["model", "experiment"],
  "additionalProperties": false,
  "properties": {
    "model": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "chain": {
          "type": "object",
          "required": ["t_c", "t_d", "phi", "gamma_p", "n_sites"],
          "additionalProperties": false,
          "properties": {
            "t_c": {"type": "number", "exclusiveMinimum": 0},
            "t_d": {"type": "number", "exclusiveMinimum": 0},
            "phi": {"type": "number"},
            "gamma_p": {"type": "number", "minimum": 0,
                        "description": "must also satisfy gamma_p < 4 t_d"},
            "omega0": {"type": "number", "default": 0},
            "n_sites": {"type": "integer", "minimum": 1},
            "boundary": {"enum": ["open", "periodic"], "default": "open"}
          }
        },
        "matrices": {
          "type": "object",
          "required": ["omega", "kappa"],
          "additionalProperties": false,
          "properties": {
            "omega": {"type": "array", "items": {"type": "number"}},
            "kappa": {"type": "array", "items": {"type": "number", "minimum": 0}},
            "coupling_g": {"$ref": "#/definitions/complex_matrix"},
            "pump": {"$ref": "#/definitions/complex_matrix"},
            "loss": {"$ref": "#/definitions/complex_matrix"}
          }
        }
      },
      "oneOf": [{"required": ["chain"]}, {"required": ["matrices"]}]
    },
    "experiment": {
      "type": "object",
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["gain-sweep", "phase-map", "noise-profile", "added-noise",
                           "nsr", "stability", "steady-state", "disorder", "classify"]},
        "gamma_p_list": {"type": "array", "items": {"type": "number"}},
        "n_list": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "omega_points": {"type": "integer", "minimum": 2},
        "omega_span": {"type": "number", "exclusiveMinimum": 0},
        "input_site": {"type": "integer", "minimum": 1},
        "omega_min": {"type": "number"},
        "omega_max": {"type": "number"},
        "gamma_p_min": {"type": "number"},
        "gamma_p_max": {"type": "number"},
        "gamma_p_points": {"type": "integer", "minimum": 2},
        "n_sites": {"type": "integer", "minimum": 2},
        "rel_tol": {"type": "number", "exclusiveMinimum": 0},
        "sites": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "site": {"type": "integer", "minimum": 1},
        "amplitude_sq": {"type": "number", "exclusiveMinimum": 0},
        "omega_d": {"type": "number"},
        "boundary": {"enum": ["open", "periodic", "both"]},
        "w_list": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "instances": {"type": "integer", "minimum": 1},
        "fit_range": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "phi_list": {"type": "array", "items": {"type": "number"}},
        "omega_list": {"type": "array", "items": {"type": "number"}}
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "dir": {"type": "string", "default": "out"},
        "formats": {"type": "array", "items": {"enum": ["csv"]}, "default": ["csv"]}
      }
    },
    "seed": {"type": "integer", "minimum": 0}
  },
  "definitions": {
    "complex_matrix": {
      "type": "object",
      "required": ["re"],
      "additionalProperties": false,
      "properties": {
        "re": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "im": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
      }
    }
  }
})";
  return schema;
}

}  // namespace topamp::cli
