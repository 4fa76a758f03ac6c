#pragma once

// Experiment config files (JSON, schema "rig-lab/1") and JSON renderings of
// reports and summaries.
//
// {
//   "schema": "rig-lab/1",
//   "model": {"family": "urig", "n": 2000, "P": 10000, "s": 1,
//             "solve_for": "K", "deviation": 0},
//   "property": {"name": "kconn", "k": 1},
//   "trials": 1000, "seed": 7,
//   "budget": {"max_exact_nodes": 24, "search_steps": 0},
//   "output": {"csv": "trials.csv", "json": "summary.json"},
//   "sweep": {"axis": "deviation", "values": [-2, 0, 2]}
// }

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "riglab/error.hpp"
#include "riglab/montecarlo.hpp"
#include "riglab/scaling.hpp"

namespace riglab {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "rig-lab/1";

struct OutputPaths {
  std::string csv;
  std::string json;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::Deviation;
  std::vector<double> values;
};

struct ConfigFile {
  ExperimentConfig experiment;
  OutputPaths output;
  std::optional<SweepSpec> sweep;
  bool seed_given = false;
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError("unknown key '" + where + item.key() + "'");
  }
}

inline const Json& require_object(const Json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("'" + key + "' must be an object");
  return j;
}

template <class T>
T get_as(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  try {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("");
    } else {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    const char* want = std::is_integral_v<T> ? "an integer" : std::is_floating_point_v<T> ? "a number" : "a string";
    throw ConfigError("'" + where + key + "' must be " + want);
  }
}

template <class T>
std::optional<T> get_opt(const Json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return get_as<T>(obj, where, key);
}

inline std::uint64_t get_seed(const Json& obj, const char* key) {
  const Json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
}

/// Which parameter keys a family takes (besides n).
inline std::vector<const char*> family_keys(const ModelFamily& f) {
  using T = ModelFamily::Tag;
  switch (f.tag) {
    case T::UniformRig: return {"K", "P"};
    case T::BinomialRig: return {"t", "P"};
    case T::Er: return {"q"};
    case T::UniformRigEr: return {"K", "P", "q"};
    case T::UniformRigRgg: return {"K", "P", "r"};
  }
  return {};
}

inline ModelRecipe parse_model(const Json& j) {
  require_object(j, "model");
  const std::string w = "model.";
  reject_unknown(j, w, {"family", "n", "K", "P", "s", "t", "q", "r", "region", "solve_for", "deviation"});
  if (!j.contains("family")) throw ConfigError("missing key 'model.family'");
  if (!j.contains("n")) throw ConfigError("missing key 'model.n'");
  const int s = get_opt<int>(j, w, "s").value_or(1);
  const Region region = j.contains("region") ? parse_region(get_as<std::string>(j, w, "region")) : Region::Torus;
  const ModelFamily family = parse_family(get_as<std::string>(j, w, "family"), s, region);
  if (j.contains("s") && !family.uses_s() && s != 1) throw ConfigError("'model.s' does not apply to this family");
  if (j.contains("region") && family.tag != ModelFamily::Tag::UniformRigRgg) {
    throw ConfigError("'model.region' only applies to family urig-rgg");
  }

  std::optional<FreeParam> free;
  if (j.contains("solve_for")) free = parse_free_param(get_as<std::string>(j, w, "solve_for"));
  if (free && *free != default_free_param(family)) {
    throw ConfigError(std::string("family ") + family_name(family.tag) + " solves for " +
                      free_param_name(default_free_param(family)));
  }
  if (j.contains("deviation") && !free) throw ConfigError("'model.deviation' requires 'model.solve_for'");

  const auto keys = family_keys(family);
  for (const char* key : {"K", "P", "t", "q", "r"}) {
    const bool belongs = std::find_if(keys.begin(), keys.end(), [&](const char* k) { return std::string(k) == key; }) !=
                         keys.end();
    const bool is_free = free && std::string(free_param_name(*free)) == key;
    if (j.contains(key) && (!belongs || is_free)) {
      throw ConfigError("'model." + std::string(key) + "' is not a fixed parameter of family " +
                        family_name(family.tag) + (is_free ? " when solving for it" : ""));
    }
    if (belongs && !is_free && !j.contains(key)) throw ConfigError("missing key 'model." + std::string(key) + "'");
  }

  FamilyParams p;
  const auto n = get_as<std::int64_t>(j, w, "n");
  if (n < 1 || n > std::numeric_limits<NodeId>::max()) throw ConfigError("'model.n' out of range");
  p.n = static_cast<NodeId>(n);
  p.K = get_opt<std::int64_t>(j, w, "K").value_or(0);
  p.P = get_opt<std::int64_t>(j, w, "P").value_or(0);
  p.t = get_opt<double>(j, w, "t").value_or(0.0);
  p.q = get_opt<double>(j, w, "q").value_or(0.0);
  p.r = get_opt<double>(j, w, "r").value_or(0.0);
  if (free) return SolveRequest{family, p, get_opt<double>(j, w, "deviation").value_or(0.0)};
  return to_model_spec(family, p);
}

inline PropertyKind parse_property_json(const Json& j) {
  if (j.is_string()) return parse_property(j.get<std::string>(), 1);
  require_object(j, "property");
  reject_unknown(j, "property.", {"name", "k"});
  if (!j.contains("name")) throw ConfigError("missing key 'property.name'");
  return parse_property(get_as<std::string>(j, "property.", "name"), get_opt<int>(j, "property.", "k").value_or(1));
}

}  // namespace detail

/// Validates against the schema and builds the config. Schema violations
/// raise ConfigError naming the offending key; bad values raise
/// ParameterError.
inline ConfigFile parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(j, "", {"schema", "model", "property", "trials", "seed", "budget", "output", "sweep", "workers"});
  if (!j.contains("schema")) throw ConfigError("missing key 'schema'");
  if (!j.at("schema").is_string() || j.at("schema").get<std::string>() != kSchema) {
    throw ConfigError(std::string("'schema' must be \"") + kSchema + "\"");
  }
  if (!j.contains("model")) throw ConfigError("missing key 'model'");
  if (!j.contains("property")) throw ConfigError("missing key 'property'");

  ConfigFile cfg;
  ExperimentConfig& e = cfg.experiment;
  e.model = detail::parse_model(j.at("model"));
  e.property = detail::parse_property_json(j.at("property"));
  if (j.contains("trials")) e.trials = detail::get_as<std::int64_t>(j, "", "trials");
  if (j.contains("seed")) {
    e.seed = detail::get_seed(j, "seed");
    cfg.seed_given = true;
  }
  if (j.contains("workers")) e.workers = detail::get_as<int>(j, "", "workers");
  if (j.contains("budget")) {
    const Json& b = detail::require_object(j.at("budget"), "budget");
    detail::reject_unknown(b, "budget.", {"max_exact_nodes", "search_steps"});
    if (b.contains("max_exact_nodes")) e.budget.max_exact_nodes = detail::get_as<int>(b, "budget.", "max_exact_nodes");
    if (b.contains("search_steps")) e.budget.search_steps = detail::get_seed(b, "search_steps");
  }
  if (j.contains("output")) {
    const Json& o = detail::require_object(j.at("output"), "output");
    detail::reject_unknown(o, "output.", {"csv", "json"});
    cfg.output.csv = detail::get_opt<std::string>(o, "output.", "csv").value_or("");
    cfg.output.json = detail::get_opt<std::string>(o, "output.", "json").value_or("");
  }
  if (j.contains("sweep")) {
    const Json& s = detail::require_object(j.at("sweep"), "sweep");
    detail::reject_unknown(s, "sweep.", {"axis", "values"});
    if (!s.contains("axis") || !s.contains("values")) throw ConfigError("'sweep' needs 'axis' and 'values'");
    SweepSpec sw;
    sw.axis = parse_sweep_axis(detail::get_as<std::string>(s, "sweep.", "axis"));
    const Json& vals = s.at("values");
    if (!vals.is_array() || vals.empty()) throw ConfigError("'sweep.values' must be a non-empty array");
    for (const auto& v : vals) {
      if (!v.is_number()) throw ConfigError("'sweep.values' must hold numbers");
      sw.values.push_back(v.get<double>());
    }
    cfg.sweep = std::move(sw);
  }
  e.validate();
  return cfg;
}

inline ConfigFile parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// JSON renderings

namespace detail {

/// JSON null for missing or non-finite values.
inline Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace detail

inline Json to_json(const PropertyKind& p) {
  Json j{{"name", property_name(p.tag)}};
  if (p.uses_k()) j["k"] = p.k;
  return j;
}

inline Json to_json(const ModelComponent& c) {
  struct Visitor {
    Json operator()(const UniformRigParams& p) const {
      return {{"kind", "urig"}, {"n", p.n}, {"K", p.K}, {"P", p.P}, {"s", p.s}};
    }
    Json operator()(const BinomialRigParams& p) const {
      return {{"kind", "brig"}, {"n", p.n}, {"t", p.t}, {"P", p.P}, {"s", p.s}};
    }
    Json operator()(const ErParams& p) const { return {{"kind", "er"}, {"n", p.n}, {"q", p.q}}; }
    Json operator()(const RggParams& p) const {
      return {{"kind", "rgg"}, {"n", p.n}, {"r", p.r}, {"region", region_name(p.region)}};
    }
  };
  return std::visit(Visitor{}, c);
}

inline Json to_json(const ModelSpec& spec) {
  Json arr = Json::array();
  for (const auto& c : spec.components) arr.push_back(to_json(c));
  return arr;
}

inline Json to_json(const SideCondition& c) {
  return {{"requirement", c.requirement}, {"ratio_name", c.ratio_name}, {"ratio", detail::number_or_null(c.ratio)},
          {"threshold", c.threshold}, {"at_least", c.at_least}, {"passes", c.passes}};
}

inline Json to_json(const SolveResult& s) {
  Json cands = Json::array();
  for (const auto& c : s.candidates)
    cands.push_back({{"value", c.value}, {"implied_deviation", detail::number_or_null(c.implied_deviation)}});
  return {{"free_parameter", free_param_name(s.param)},
          {"target_deviation", s.target_deviation},
          {"real_value", s.real_value},
          {"clamped", s.clamped},
          {"candidates", cands},
          {"chosen", s.chosen}};
}

inline Json to_json(const CouplingReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.side_conditions) conds.push_back(to_json(c));
  Json j{{"family", describe(r.family)},
         {"property", to_json(r.property)},
         {"coupling", r.coupling},
         {"edge_probability", r.edge_probability},
         {"deviation", detail::number_or_null(r.deviation)},
         {"prediction", detail::number_or_null(r.prediction)},
         {"side_conditions", conds},
         {"side_conditions_pass", all_pass(r.side_conditions)}};
  if (r.spec) {
    j["limit_form"] = limit_form_name(r.spec->limit);
    j["lnln_coefficient"] = r.spec->lnln_coefficient;
    j["predicts_min_degree_only"] = r.spec->predicts_min_degree_only;
  } else {
    j["limit_form"] = nullptr;
  }
  return j;
}

inline Json to_json(const ExperimentSummary& s) {
  Json j{{"model", s.model},
         {"property", to_json(s.property)},
         {"n", s.n},
         {"trials", s.trials},
         {"successes", s.successes},
         {"empirical", s.empirical},
         {"wilson95", {{"lo", s.wilson.lo}, {"hi", s.wilson.hi}}},
         {"implied_deviation", detail::number_or_null(s.implied_deviation())},
         {"prediction", detail::number_or_null(s.prediction())},
         {"min_degree_successes", s.min_degree_successes},
         {"connected_successes", s.connected_successes},
         {"audit_violations", s.audit_violations},
         {"audit_messages", s.audit_messages},
         {"side_conditions_pass", s.side_conditions_pass()}};
  j["scaling"] = s.scaling ? to_json(*s.scaling) : Json(nullptr);
  j["solve"] = s.solve ? to_json(*s.solve) : Json(nullptr);
  return j;
}

/// The effective config, as run. Worker count is left out on purpose: it
/// does not affect results and would break byte-identical reruns.
inline Json effective_config_json(const ExperimentConfig& cfg, const ModelSpec& resolved, const OutputPaths& out) {
  Json j{{"schema", kSchema},
         {"model", to_json(resolved)},
         {"property", to_json(cfg.property)},
         {"trials", cfg.trials},
         {"seed", cfg.seed},
         {"stream_offset", cfg.stream_offset},
         {"budget", {{"max_exact_nodes", cfg.budget.max_exact_nodes}, {"search_steps", cfg.budget.search_steps}}},
         {"record_timing", cfg.record_timing}};
  if (const auto* req = std::get_if<SolveRequest>(&cfg.model)) {
    j["solve_request"] = {{"family", describe(req->family)},
                          {"free_parameter", free_param_name(default_free_param(req->family))},
                          {"deviation", req->deviation}};
  }
  j["output"] = {{"csv", out.csv}, {"json", out.json}};
  return j;
}

inline Json experiment_json(const ExperimentConfig& cfg, const ExperimentResult& res, const ModelSpec& resolved,
                            const OutputPaths& out) {
  return {{"schema", kSchema}, {"config", effective_config_json(cfg, resolved, out)}, {"summary", to_json(res.summary)}};
}

inline Json sweep_json(const ExperimentConfig& tmpl, const SweepSpec& sw, const std::vector<SweepPoint>& points) {
  Json arr = Json::array();
  for (const auto& p : points) {
    Json row{{"value", p.value}};
    row["summary"] = p.summary ? to_json(*p.summary) : Json(nullptr);
    row["error"] = p.error ? Json(*p.error) : Json(nullptr);
    arr.push_back(std::move(row));
  }
  Json cfg{{"property", to_json(tmpl.property)},
           {"trials", tmpl.trials},
           {"seed", tmpl.seed},
           {"budget", {{"max_exact_nodes", tmpl.budget.max_exact_nodes}, {"search_steps", tmpl.budget.search_steps}}}};
  return {{"schema", kSchema}, {"axis", sweep_axis_name(sw.axis)}, {"config", cfg}, {"points", arr}};
}

}  // namespace riglab
