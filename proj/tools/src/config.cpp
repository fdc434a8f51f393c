#include "qdioph_cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace qdioph::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& member(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing key '" + key + "'");
  return *it;
}

std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

double as_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> as_reals(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_real(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<QuadInt> as_quad_ints(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of [a, b] pairs");
  std::vector<QuadInt> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw ConfigError(w + ": expected [a, b]");
    out.push_back({as_int(j[i][0], w), as_int(j[i][1], w)});
  }
  return out;
}

PsiSpec parse_psi(const json& j) {
  require_object(j, "problem.psi");
  reject_unknown(j, "problem.psi", {"family", "params"});
  const json& fam = member(j, "family", "problem.psi");
  if (!fam.is_string()) throw ConfigError("problem.psi.family: expected a string");
  const std::string family = fam.get<std::string>();
  const json params = j.contains("params") ? j["params"] : json::object();
  require_object(params, "problem.psi.params");
  const std::string where = "problem.psi.params";
  try {
    if (family == "constant") {
      reject_unknown(params, where, {"c"});
      return PsiSpec::constant(params.contains("c") ? as_real(params["c"], where + ".c") : 1.0);
    }
    if (family == "power") {
      reject_unknown(params, where, {"c", "s"});
      return PsiSpec::power(params.contains("c") ? as_real(params["c"], where + ".c") : 1.0,
                            as_real(member(params, "s", where), where + ".s"));
    }
    if (family == "step") {
      reject_unknown(params, where, {"breaks", "values"});
      return PsiSpec::step(as_reals(member(params, "breaks", where), where + ".breaks"),
                           as_reals(member(params, "values", where), where + ".values"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem.psi: ") + e.what());
  }
  throw ConfigError("problem.psi.family: unknown family '" + family + "'");
}

}  // namespace

ExperimentPlan ExperimentConfig::experiment_plan() const {
  if (!plan) throw ConfigError("config: missing 'plan'");
  ExperimentPlan p;
  p.spec = problem;
  p.T_grid = plan->T_grid;
  p.theta_count = plan->theta_count;
  p.theta_box = plan->theta_box;
  p.seed = plan->seed;
  return p;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, "config", {"field", "problem", "plan", "outputs"});

  ExperimentConfig cfg;
  const json& field = member(root, "field", "config");
  require_object(field, "field");
  reject_unknown(field, "field", {"D"});
  try {
    cfg.problem.field = field_new(as_int(member(field, "D", "field"), "field.D"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }

  const json& problem = member(root, "problem", "config");
  require_object(problem, "problem");
  reject_unknown(problem, "problem", {"m", "n", "psi", "v", "ideal"});
  const std::int64_t m = as_int(member(problem, "m", "problem"), "problem.m");
  const std::int64_t n = as_int(member(problem, "n", "problem"), "problem.n");
  if (m < 1 || n < 1 || m > 8 || n > 8) throw ConfigError("problem: m and n must lie in [1, 8]");
  cfg.problem.m = static_cast<int>(m);
  cfg.problem.n = static_cast<int>(n);
  cfg.problem.psi = parse_psi(member(problem, "psi", "problem"));
  if (problem.contains("v")) {
    cfg.problem.v = as_quad_ints(problem["v"], "problem.v");
  } else {
    cfg.problem.v.assign(static_cast<std::size_t>(m + n), QuadInt{0, 0});
  }
  if (cfg.problem.v.size() != static_cast<std::size_t>(m + n)) {
    throw ConfigError("problem.v: expected m + n = " + std::to_string(m + n) + " entries");
  }
  if (problem.contains("ideal")) {
    const json& ideal = problem["ideal"];
    require_object(ideal, "problem.ideal");
    reject_unknown(ideal, "problem.ideal", {"generators"});
    const auto gens = as_quad_ints(member(ideal, "generators", "problem.ideal"), "problem.ideal.generators");
    try {
      cfg.problem.ideal = ideal_from_generators(cfg.problem.field, gens);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("problem.ideal: ") + e.what());
    }
  }

  if (root.contains("plan")) {
    const json& plan = root["plan"];
    require_object(plan, "plan");
    reject_unknown(plan, "plan", {"T_grid", "theta_count", "theta_box", "seed"});
    PlanConfig p;
    p.T_grid = as_reals(member(plan, "T_grid", "plan"), "plan.T_grid");
    if (plan.contains("theta_count")) {
      const std::int64_t c = as_int(plan["theta_count"], "plan.theta_count");
      if (c < 1 || c > 1'000'000) throw ConfigError("plan.theta_count: must lie in [1, 1e6]");
      p.theta_count = static_cast<int>(c);
    }
    if (plan.contains("theta_box")) p.theta_box = as_real(plan["theta_box"], "plan.theta_box");
    if (plan.contains("seed")) {
      const json& s = plan["seed"];
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
        throw ConfigError("plan.seed: expected a nonnegative integer");
      }
      p.seed = s.get<std::uint64_t>();
    }
    cfg.plan = p;
    try {
      cfg.experiment_plan().validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("plan: ") + e.what());
    }
  }

  if (root.contains("outputs")) {
    const json& out = root["outputs"];
    require_object(out, "outputs");
    reject_unknown(out, "outputs", {"csv_path", "svg_path"});
    for (const char* key : {"csv_path", "svg_path"}) {
      if (!out.contains(key)) continue;
      if (!out[key].is_string()) throw ConfigError(std::string("outputs.") + key + ": expected a string");
      (std::string(key) == "csv_path" ? cfg.outputs.csv_path : cfg.outputs.svg_path) = out[key].get<std::string>();
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qdioph::cli
