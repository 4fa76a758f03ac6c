// rig_lab: generate graphs, check properties, evaluate threshold laws and run
// Monte Carlo experiments.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 bad flags/config/parameters/input,
// 3 decision budget exceeded, 4 I/O failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riglab/config.hpp"
#include "riglab/graph.hpp"
#include "riglab/models.hpp"
#include "riglab/montecarlo.hpp"
#include "riglab/properties.hpp"
#include "riglab/robustness.hpp"
#include "riglab/scaling.hpp"

namespace {

using namespace riglab;

constexpr const char* kFamilies = "urig, brig, er, urig-er, urig-rgg";
constexpr const char* kProperties = "mindeg, kconn, pm, hamilton, robust";

// 6 significant digits for people.
std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string num(std::optional<double> v, const char* missing = "unspecified") {
  return v ? num(*v) : std::string(missing);
}

void row(std::ostream& os, const std::string& key, const std::string& value) {
  os << key;
  for (std::size_t i = key.size(); i < 20; ++i) os << ' ';
  os << value << '\n';
}

// ---------------------------------------------------------------------------
// Shared flags

struct ModelFlags {
  std::string family;
  int s = 1;
  std::string region = "torus";
  std::optional<std::int64_t> n, K, P;
  std::optional<double> t, q, r;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m, const std::string& family_names) {
  cmd->add_option(family_names, m.family, std::string("model family: ") + kFamilies)->required();
  cmd->add_option("--s", m.s, "shared items needed for an edge (urig, brig, urig-er)")->default_val(1);
  cmd->add_option("--region", m.region, "urig-rgg region: torus or square")->default_val("torus");
  cmd->add_option("--n", m.n, "number of nodes");
  cmd->add_option("--K", m.K, "items per node (urig, urig-er, urig-rgg)");
  cmd->add_option("--P", m.P, "item pool size");
  cmd->add_option("--t", m.t, "item inclusion probability (brig)");
  cmd->add_option("--q", m.q, "edge probability (er, urig-er)");
  cmd->add_option("--r", m.r, "connection radius (urig-rgg)");
}

ModelFamily family_from(const ModelFlags& m) {
  return parse_family(m.family, m.s, parse_region(m.region));
}

bool flag_given(const ModelFlags& m, const std::string& key) {
  if (key == "K") return m.K.has_value();
  if (key == "P") return m.P.has_value();
  if (key == "t") return m.t.has_value();
  if (key == "q") return m.q.has_value();
  return m.r.has_value();
}

/// Collects the family's parameters from flags. `free` names a parameter that
/// must be left out (it is being solved for); `need_all` demands the rest.
FamilyParams params_from(const ModelFamily& f, const ModelFlags& m, std::optional<FreeParam> free, bool need_all) {
  const auto keys = detail::family_keys(f);
  for (const char* key : {"K", "P", "t", "q", "r"}) {
    bool belongs = false;
    for (const char* k : keys) belongs = belongs || std::string(k) == key;
    const bool is_free = free && std::string(free_param_name(*free)) == key;
    if (flag_given(m, key) && !belongs) {
      throw ParameterError(std::string("--") + key + " does not apply to family " + family_name(f.tag));
    }
    if (flag_given(m, key) && is_free) throw ParameterError(std::string("--") + key + " is the solved parameter");
    if (need_all && belongs && !is_free && !flag_given(m, key)) {
      throw ParameterError(std::string("family ") + family_name(f.tag) + " needs --" + key);
    }
  }
  if (need_all && !m.n) throw ParameterError("--n is required");
  FamilyParams p;
  if (m.n) {
    if (*m.n < 1 || *m.n > std::numeric_limits<NodeId>::max()) throw ParameterError("--n out of range");
    p.n = static_cast<NodeId>(*m.n);
  }
  p.K = m.K.value_or(0);
  p.P = m.P.value_or(0);
  p.t = m.t.value_or(0.0);
  p.q = m.q.value_or(0.0);
  p.r = m.r.value_or(0.0);
  return p;
}

struct DeviationFlags {
  std::optional<double> value;
};

void add_deviation_flags(CLI::App* cmd, DeviationFlags& d) {
  cmd->add_option("--deviation,--alpha,--beta,--gamma,--a,--b", d.value,
                  "deviation from the threshold (alpha, beta, gamma; a or b for urig-rgg)");
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw ConfigError(what + " must be a non-negative integer (got '" + text + "')");
  }
  return v;
}

/// Precedence: flag, then config, then RIG_LAB_SEED, then 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::optional<std::uint64_t> config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("RIG_LAB_SEED"); env != nullptr && *env != '\0') {
    return parse_seed_text(env, "RIG_LAB_SEED");
  }
  return 1;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Reports

void print_conditions(std::ostream& os, const std::vector<SideCondition>& conds) {
  if (conds.empty()) {
    row(os, "side conditions", "none");
    return;
  }
  for (const auto& c : conds) {
    row(os, "side condition",
        c.requirement + ": " + c.ratio_name + " = " + num(c.ratio) + (c.at_least ? " (want >= " : " (want <= ") +
            num(c.threshold) + ") " + (c.passes ? "ok" : "FLAGGED"));
  }
}

void print_report(std::ostream& os, const CouplingReport& r) {
  row(os, "family", describe(r.family));
  row(os, "property", describe(r.property));
  row(os, "limit form", r.spec ? limit_form_name(r.spec->limit) : "none (no law for this pair)");
  if (r.spec && r.spec->predicts_min_degree_only) row(os, "note", "law covers min degree only");
  row(os, "coupling", num(r.coupling));
  row(os, "edge probability", num(r.edge_probability));
  row(os, "deviation", num(r.deviation, "n/a"));
  row(os, "prediction", num(r.prediction));
  print_conditions(os, r.side_conditions);
}

void print_summary(std::ostream& os, const ExperimentSummary& s) {
  row(os, "model", s.model);
  row(os, "property", describe(s.property));
  row(os, "trials", std::to_string(s.trials));
  row(os, "successes", std::to_string(s.successes));
  row(os, "empirical", num(s.empirical));
  row(os, "wilson 95%", "[" + num(s.wilson.lo) + ", " + num(s.wilson.hi) + "]");
  row(os, "implied deviation", num(s.implied_deviation(), "n/a"));
  row(os, "prediction", num(s.prediction()));
  row(os, "min degree >= k", std::to_string(s.min_degree_successes));
  row(os, "connected", std::to_string(s.connected_successes));
  row(os, "audit violations", std::to_string(s.audit_violations));
  if (s.scaling) print_conditions(os, s.scaling->side_conditions);
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenerateCmd {
  ModelFlags model;
  std::optional<std::uint64_t> seed;
  std::string out;

  int run() const {
    const ModelFamily f = family_from(model);
    const ModelSpec spec = to_model_spec(f, params_from(f, model, std::nullopt, true));
    spec.validate();
    const Graph g = sample_model(spec, RngStream{resolve_seed(seed, std::nullopt), 0});
    const std::string text = to_edge_list(g);
    const std::string counts = std::to_string(g.node_count()) + " nodes, " + std::to_string(g.edge_count()) + " edges";
    if (out.empty() || out == "-") {
      std::cout << text;
      std::cerr << counts << '\n';
    } else {
      write_file(out, text);
      std::cout << counts << " -> " << out << '\n';
    }
    return 0;
  }
};

struct CheckCmd {
  std::string file;
  std::string property;
  int k = 1;
  DecisionBudget budget;

  int run() const {
    const PropertyKind prop = parse_property(property, k);
    Graph g;
    if (file == "-") {
      g = read_edge_list(std::cin);
    } else {
      std::ifstream in(file);
      if (!in) throw IoError("cannot open graph file '" + file + "'");
      g = read_edge_list(in);
    }
    if (prop.tag == PropertyKind::Tag::KRobust) {
      const auto res = check_k_robust(g, prop.k, budget);
      std::cout << (res.robust ? "true" : "false") << '\n';
      if (res.witness) {
        std::cout << "witness T:";
        for (NodeId v : res.witness->members()) std::cout << ' ' << v;
        std::cout << '\n';
      }
      return 0;
    }
    std::cout << (evaluate_property(g, prop, budget) ? "true" : "false") << '\n';
    return 0;
  }
};

struct PredictCmd {
  ModelFlags model;
  std::string property;
  int k = 1;
  DeviationFlags dev;
  bool json = false;

  int run() const {
    const ModelFamily f = family_from(model);
    f.validate();
    const PropertyKind prop = parse_property(property, k);
    const bool has_params = model.K || model.P || model.t || model.q || model.r;
    if (dev.value && has_params) throw ParameterError("give either a deviation or model parameters, not both");
    if (dev.value) {
      const ThresholdSpec spec = require_threshold_spec(f, prop);
      const auto p = limiting_probability(spec, *dev.value);
      if (json) {
        std::cout << Json{{"schema", kSchema},
                          {"family", describe(f)},
                          {"property", to_json(prop)},
                          {"limit_form", limit_form_name(spec.limit)},
                          {"deviation", *dev.value},
                          {"prediction", detail::number_or_null(p)}}
                         .dump(2)
                  << '\n';
        return 0;
      }
      row(std::cout, "family", describe(f));
      row(std::cout, "property", describe(prop));
      row(std::cout, "limit form", limit_form_name(spec.limit));
      row(std::cout, "deviation", num(*dev.value));
      row(std::cout, "prediction", num(p));
      return 0;
    }
    const FamilyParams params = params_from(f, model, std::nullopt, true);
    to_model_spec(f, params).validate();
    const CouplingReport rep = coupling_report(f, params, prop);
    if (json) {
      std::cout << Json{{"schema", kSchema}, {"report", to_json(rep)}}.dump(2) << '\n';
    } else {
      print_report(std::cout, rep);
    }
    return 0;
  }
};

struct SolveCmd {
  ModelFlags model;
  std::string property;
  int k = 1;
  DeviationFlags dev;
  std::optional<std::string> solve_for;
  bool json = false;

  int run() const {
    const ModelFamily f = family_from(model);
    f.validate();
    const PropertyKind prop = parse_property(property, k);
    const ThresholdSpec spec = require_threshold_spec(f, prop);
    std::optional<FreeParam> free;
    if (solve_for) free = parse_free_param(*solve_for);
    const FreeParam param = free.value_or(default_free_param(f));
    const FamilyParams fixed = params_from(f, model, param, true);
    const double target = dev.value.value_or(0.0);
    const SolveResult res = solve_param(spec, fixed, target, free);
    const CouplingReport rep = coupling_report(f, res.best().params, prop);
    if (json) {
      std::cout << Json{{"schema", kSchema}, {"solve", to_json(res)}, {"report", to_json(rep)}}.dump(2) << '\n';
      return 0;
    }
    row(std::cout, "family", describe(f));
    row(std::cout, "property", describe(prop));
    row(std::cout, "target deviation", num(target));
    row(std::cout, std::string("real ") + free_param_name(param), num(res.real_value));
    if (res.clamped) row(std::cout, "note", "solution below the domain; clamped");
    for (std::size_t i = 0; i < res.candidates.size(); ++i) {
      const auto& c = res.candidates[i];
      row(std::cout, i == res.chosen ? "chosen" : "candidate",
          std::string(free_param_name(param)) + " = " + num(c.value) + ", implied deviation " +
              num(c.implied_deviation));
    }
    row(std::cout, "coupling", num(rep.coupling));
    row(std::cout, "edge probability", num(rep.edge_probability));
    row(std::cout, "implied deviation", num(rep.deviation, "n/a"));
    row(std::cout, "prediction", num(rep.prediction));
    print_conditions(std::cout, rep.side_conditions);
    return 0;
  }
};

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> workers;
  std::optional<std::string> csv;
  std::optional<std::string> json;
  bool timing = false;

  void add(CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "experiment config (JSON, schema rig-lab/1)")->required();
    cmd->add_option("--seed", seed, "base seed (overrides config and RIG_LAB_SEED)");
    cmd->add_option("--trials", trials, "trials per experiment");
    cmd->add_option("--workers", workers, "worker threads (default: available cores)");
    cmd->add_option("--csv", csv, "output CSV path");
    cmd->add_option("--json", json, "output JSON path");
    cmd->add_flag("--timing", timing, "record per-trial wall time in the CSV");
  }

  ConfigFile load() const {
    ConfigFile cfg = load_config(config);
    ExperimentConfig& e = cfg.experiment;
    e.seed = resolve_seed(seed, cfg.seed_given ? std::optional<std::uint64_t>(e.seed) : std::nullopt);
    if (trials) e.trials = *trials;
    if (workers) e.workers = *workers;
    if (csv) cfg.output.csv = *csv;
    if (json) cfg.output.json = *json;
    if (timing) e.record_timing = true;
    e.validate();
    return cfg;
  }
};

struct ExperimentCmd {
  RunFlags flags;

  int run() const {
    const ConfigFile cfg = flags.load();
    const ResolvedModel resolved = resolve_model(cfg.experiment.model, cfg.experiment.property);
    const ExperimentResult res = run_experiment(cfg.experiment);
    print_summary(std::cout, res.summary);
    if (!cfg.output.csv.empty()) write_file(cfg.output.csv, records_csv(res.records));
    if (!cfg.output.json.empty()) {
      write_file(cfg.output.json, experiment_json(cfg.experiment, res, resolved.spec, cfg.output).dump(2) + "\n");
    }
    return 0;
  }
};

struct SweepCmd {
  RunFlags flags;
  std::optional<std::string> axis;
  std::vector<double> values;

  int run() const {
    ConfigFile cfg = flags.load();
    SweepSpec sw = cfg.sweep.value_or(SweepSpec{});
    if (axis) sw.axis = parse_sweep_axis(*axis);
    if (!values.empty()) sw.values = values;
    if (sw.values.empty()) throw ConfigError("sweep needs values (config 'sweep.values' or --values)");
    const auto points = sweep(cfg.experiment, sw.axis, sw.values);
    std::cout << sweep_axis_name(sw.axis) << "\tempirical\twilson95\tprediction\n";
    for (const auto& p : points) {
      std::cout << num(p.value) << '\t';
      if (p.summary) {
        std::cout << num(p.summary->empirical) << "\t[" << num(p.summary->wilson.lo) << ", "
                  << num(p.summary->wilson.hi) << "]\t" << num(p.summary->prediction()) << '\n';
      } else {
        std::cout << "error: " << *p.error << '\n';
      }
    }
    if (!cfg.output.csv.empty()) {
      std::ostringstream os;
      write_sweep_csv(os, sw.axis, points);
      write_file(cfg.output.csv, os.str());
    }
    if (!cfg.output.json.empty()) write_file(cfg.output.json, sweep_json(cfg.experiment, sw, points).dump(2) + "\n");
    return 0;
  }
};

int fail(int code, const std::string& msg) {
  std::cerr << "rig_lab: " << msg << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random intersection graph laboratory: sampling, property checks, threshold laws and experiments."};
  app.footer(std::string("Families: ") + kFamilies + "\nProperties: " + kProperties +
             "\nRIG_LAB_SEED sets the default base seed.\n"
             "Exit codes: 2 invalid input, 3 decision budget exceeded, 4 I/O failure.");
  app.require_subcommand(1);

  GenerateCmd gen;
  auto* g = app.add_subcommand("generate", "sample one graph and write its edge list");
  add_model_flags(g, gen.model, "--model,--family");
  g->add_option("--seed", gen.seed, "base seed");
  g->add_option("-o,--out", gen.out, "output file (default stdout)");

  CheckCmd chk;
  auto* c = app.add_subcommand("check", "decide a property on an edge-list file");
  c->add_option("file", chk.file, "edge-list file, or - for stdin")->required();
  c->add_option("--property", chk.property, std::string("property: ") + kProperties)->required();
  c->add_option("--k", chk.k, "k for mindeg, kconn, robust")->default_val(1);
  c->add_option("--max-exact-nodes", chk.budget.max_exact_nodes, "largest n for exponential searches")
      ->default_val(chk.budget.max_exact_nodes);
  c->add_option("--search-steps", chk.budget.search_steps, "Hamilton search step cap (0 = automatic)")
      ->default_val(0);

  PredictCmd pred;
  auto* p = app.add_subcommand("predict", "limiting probability from a deviation or from parameters");
  add_model_flags(p, pred.model, "--family,--model");
  p->add_option("--property", pred.property, std::string("property: ") + kProperties)->required();
  p->add_option("--k", pred.k, "k for mindeg, kconn, robust")->default_val(1);
  add_deviation_flags(p, pred.dev);
  p->add_flag("--json", pred.json, "machine-readable output");

  SolveCmd sol;
  auto* s = app.add_subcommand("solve", "solve the threshold law for the free parameter");
  add_model_flags(s, sol.model, "--family,--model");
  s->add_option("--property", sol.property, std::string("property: ") + kProperties)->required();
  s->add_option("--k", sol.k, "k for mindeg, kconn, robust")->default_val(1);
  add_deviation_flags(s, sol.dev);
  s->add_option("--solve-for", sol.solve_for, "free parameter: K, t, q or r (default per family)");
  s->add_flag("--json", sol.json, "machine-readable output");

  ExperimentCmd exp;
  auto* e = app.add_subcommand("experiment", "run a Monte Carlo experiment from a config file");
  exp.flags.add(e);

  SweepCmd swp;
  auto* w = app.add_subcommand("sweep", "run one experiment per axis value");
  swp.flags.add(w);
  w->add_option("--axis", swp.axis, "deviation, n or k");
  w->add_option("--values", swp.values, "axis values, comma separated")->delimiter(',')->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return gen.run();
    if (*c) return chk.run();
    if (*p) return pred.run();
    if (*s) return sol.run();
    if (*e) return exp.run();
    if (*w) return swp.run();
  } catch (const BudgetExceeded& err) {
    return fail(3, err.what());
  } catch (const IoError& err) {
    return fail(4, err.what());
  } catch (const Error& err) {
    return fail(2, err.what());
  } catch (const std::exception& err) {
    return fail(1, err.what());
  }
  return 1;
}
