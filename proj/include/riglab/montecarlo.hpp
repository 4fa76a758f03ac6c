#pragma once

// Seeded Monte Carlo estimation of property probabilities, compared against
// the limiting probability of the matching threshold law.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "riglab/connectivity.hpp"
#include "riglab/decision_budget.hpp"
#include "riglab/error.hpp"
#include "riglab/matching.hpp"
#include "riglab/models.hpp"
#include "riglab/properties.hpp"
#include "riglab/rng.hpp"
#include "riglab/scaling.hpp"

namespace riglab {

// ---------------------------------------------------------------------------
// Statistics

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion, clamped to [0, 1].
inline Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.96) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw ParameterError("wilson_interval: requires 0 <= successes <= trials and trials >= 1");
  }
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds are exactly 0 or 1 at the extremes; rounding would miss them.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Configuration

/// Parameters found by inverting a threshold law at a target deviation.
struct SolveRequest {
  ModelFamily family;
  FamilyParams fixed;  // the free field is ignored
  double deviation = 0.0;
};

/// Either an explicit model or a request to solve for one.
using ModelRecipe = std::variant<ModelSpec, SolveRequest>;

struct ExperimentConfig {
  ModelRecipe model;
  PropertyKind property;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  /// Mixed into every trial seed; sweeps give each point its own offset.
  std::uint64_t stream_offset = 0;
  DecisionBudget budget;
  /// 0 means one worker per available core.
  int workers = 0;
  /// Off by default so records (and their CSV) are byte-reproducible.
  bool record_timing = false;

  void validate() const {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    if (workers < 0) throw ParameterError("workers must be >= 0");
    property.validate();
    budget.validate();
  }
};

/// A recipe after solving: the concrete spec plus how it was obtained.
struct ResolvedModel {
  ModelSpec spec;
  std::optional<SolveResult> solve;
};

inline ResolvedModel resolve_model(const ModelRecipe& recipe, const PropertyKind& property) {
  if (const auto* spec = std::get_if<ModelSpec>(&recipe)) {
    spec->validate();
    return {*spec, std::nullopt};
  }
  const auto& req = std::get<SolveRequest>(recipe);
  const auto law = require_threshold_spec(req.family, property);
  auto solved = solve_param(law, req.fixed, req.deviation);
  ModelSpec spec = to_model_spec(req.family, solved.best().params);
  return {std::move(spec), std::move(solved)};
}

/// Base seed of the trials of one experiment (or sweep point).
inline std::uint64_t point_seed(std::uint64_t seed, std::uint64_t stream_offset) {
  return stream_offset == 0 ? seed : derive_seed(seed, stream_offset);
}

// ---------------------------------------------------------------------------
// Records and summaries

struct TrialRecord {
  std::int64_t index = 0;
  std::uint64_t seed = 0;  // derived per-trial seed
  bool outcome = false;
  std::size_t edges = 0;
  NodeId min_degree = 0;
  bool connected = false;
  /// Filled only for Hamiltonian graphs, to audit the implications.
  std::optional<bool> two_connected;
  std::optional<bool> near_perfect_matching;
  std::optional<double> millis;
};

/// Implications every sampled graph must satisfy; returns the broken ones.
inline std::vector<std::string> audit_trial(const TrialRecord& r, const PropertyKind& p, NodeId n) {
  using T = PropertyKind::Tag;
  std::vector<std::string> broken;
  if (!r.outcome) return broken;
  switch (p.tag) {
    case T::KConnected:
      if (r.min_degree < p.k) broken.emplace_back("k-connected => min degree >= k");
      if (!r.connected) broken.emplace_back("k-connected => connected");
      break;
    case T::MinDegreeAtLeast:
      if (r.min_degree < p.k) broken.emplace_back("min degree outcome disagrees with recorded min degree");
      break;
    case T::HamiltonCycle:
      if (!r.two_connected.value_or(false)) broken.emplace_back("Hamiltonian => 2-connected");
      if (!r.connected) broken.emplace_back("Hamiltonian => connected");
      if (n >= 3 && !r.near_perfect_matching.value_or(false)) {
        broken.emplace_back("Hamiltonian => near-perfect matching");
      }
      break;
    case T::KRobust:
      if (p.k >= 2 && r.min_degree < p.k) broken.emplace_back("k-robust => min degree >= k");
      if (p.k == 1 && !r.connected) broken.emplace_back("1-robust => connected");
      break;
    case T::NearPerfectMatching: break;
  }
  return broken;
}

struct ExperimentSummary {
  std::string model;  // human-readable component list
  PropertyKind property;
  NodeId n = 0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double empirical = 0.0;
  Interval wilson;
  /// Trials whose graph had min degree >= k (k = 1 for k-free properties).
  std::int64_t min_degree_successes = 0;
  std::int64_t connected_successes = 0;
  std::int64_t audit_violations = 0;
  std::vector<std::string> audit_messages;  // first few only
  std::optional<CouplingReport> scaling;    // present when the model is a known family
  std::optional<SolveResult> solve;

  [[nodiscard]] std::optional<double> implied_deviation() const {
    return scaling ? scaling->deviation : std::nullopt;
  }
  [[nodiscard]] std::optional<double> prediction() const { return scaling ? scaling->prediction : std::nullopt; }
  [[nodiscard]] bool side_conditions_pass() const { return !scaling || all_pass(scaling->side_conditions); }
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<TrialRecord> records;
};

namespace detail {

inline std::string describe_component(const ModelComponent& c) {
  struct Visitor {
    std::string operator()(const UniformRigParams& p) const {
      return "urig(n=" + std::to_string(p.n) + ",K=" + std::to_string(p.K) + ",P=" + std::to_string(p.P) +
             ",s=" + std::to_string(p.s) + ")";
    }
    std::string operator()(const BinomialRigParams& p) const {
      std::ostringstream os;
      os.precision(17);
      os << "brig(n=" << p.n << ",t=" << p.t << ",P=" << p.P << ",s=" << p.s << ")";
      return os.str();
    }
    std::string operator()(const ErParams& p) const {
      std::ostringstream os;
      os.precision(17);
      os << "er(n=" << p.n << ",q=" << p.q << ")";
      return os.str();
    }
    std::string operator()(const RggParams& p) const {
      std::ostringstream os;
      os.precision(17);
      os << "rgg(n=" << p.n << ",r=" << p.r << "," << region_name(p.region) << ")";
      return os.str();
    }
  };
  return std::visit(Visitor{}, c);
}

inline TrialRecord run_trial(const ModelSpec& spec, const ExperimentConfig& cfg, std::uint64_t base,
                             std::int64_t index) {
  const auto start = std::chrono::steady_clock::now();
  const RngStream stream{base, static_cast<std::uint64_t>(index)};
  const Graph g = sample_model(spec, stream);
  TrialRecord r;
  r.index = index;
  r.seed = stream.derived_seed();
  r.edges = g.edge_count();
  r.min_degree = min_degree(g);
  r.connected = is_connected(g);
  r.outcome = evaluate_property(g, cfg.property, cfg.budget);
  if (cfg.property.tag == PropertyKind::Tag::HamiltonCycle && r.outcome) {
    r.two_connected = is_k_connected(g, 2);
    r.near_perfect_matching = has_near_perfect_matching(g);
  }
  if (cfg.record_timing) {
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

inline int worker_count(int requested, std::int64_t trials) {
  std::int64_t w = requested > 0 ? requested : static_cast<std::int64_t>(std::thread::hardware_concurrency());
  return static_cast<int>(std::clamp<std::int64_t>(w, 1, trials));
}

}  // namespace detail

inline std::string describe(const ModelSpec& spec) {
  std::string out;
  for (const auto& c : spec.components) {
    if (!out.empty()) out += " & ";
    out += detail::describe_component(c);
  }
  return out;
}

/// Summary statistics over ordered records.
inline ExperimentSummary summarize(const ModelSpec& spec, const PropertyKind& property,
                                   const std::vector<TrialRecord>& records, std::optional<SolveResult> solve = {}) {
  ExperimentSummary s;
  s.model = describe(spec);
  s.property = property;
  s.n = spec.node_count();
  s.trials = static_cast<std::int64_t>(records.size());
  const int k = property.uses_k() ? property.k : 1;
  for (const auto& r : records) {
    s.successes += r.outcome;
    s.min_degree_successes += r.min_degree >= k;
    s.connected_successes += r.connected;
    for (auto& msg : audit_trial(r, property, s.n)) {
      ++s.audit_violations;
      if (s.audit_messages.size() < 10) s.audit_messages.push_back("trial " + std::to_string(r.index) + ": " + msg);
    }
  }
  if (s.trials > 0) {
    s.empirical = static_cast<double>(s.successes) / static_cast<double>(s.trials);
    s.wilson = wilson_interval(s.successes, s.trials);
  }
  if (auto fam = family_of(spec)) s.scaling = coupling_report(fam->first, fam->second, property);
  s.solve = std::move(solve);
  return s;
}

/// Runs every trial on a worker pool. Records come back ordered by trial
/// index, so the result does not depend on the worker count. If any trial
/// fails (e.g. BudgetExceeded), the error of the lowest failing index is
/// rethrown after the pool drains.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ResolvedModel resolved = resolve_model(cfg.model, cfg.property);
  const ModelSpec& spec = resolved.spec;
  const std::uint64_t base = point_seed(cfg.seed, cfg.stream_offset);

  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.trials));
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::int64_t i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      try {
        records[static_cast<std::size_t>(i)] = detail::run_trial(spec, cfg, base, i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const int workers = detail::worker_count(cfg.workers, cfg.trials);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  // Indices are claimed in order, so every index below a failure completed.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentResult out;
  out.summary = summarize(spec, cfg.property, records, std::move(resolved.solve));
  out.records = std::move(records);
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { Deviation, N, K };

inline const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Deviation: return "deviation";
    case SweepAxis::N: return "n";
    case SweepAxis::K: return "k";
  }
  return "?";
}

inline SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "deviation") return SweepAxis::Deviation;
  if (name == "n") return SweepAxis::N;
  if (name == "k") return SweepAxis::K;
  throw ParameterError("unknown sweep axis '" + std::string(name) + "' (expected deviation, n or k)");
}

struct SweepPoint {
  double value = 0.0;
  std::optional<ExperimentSummary> summary;
  std::optional<std::string> error;
};

namespace detail {

inline NodeId as_node_count(double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 2e9) throw ParameterError("sweep: n values must be positive integers");
  return static_cast<NodeId>(v);
}

/// The config of one sweep point.
inline ExperimentConfig sweep_point_config(const ExperimentConfig& tmpl, SweepAxis axis, double value,
                                           std::size_t index) {
  ExperimentConfig cfg = tmpl;
  cfg.stream_offset = tmpl.stream_offset + index + 1;
  switch (axis) {
    case SweepAxis::Deviation: {
      auto* req = std::get_if<SolveRequest>(&cfg.model);
      if (req == nullptr) throw ParameterError("a deviation sweep needs a model with solve_for");
      req->deviation = value;
      break;
    }
    case SweepAxis::N: {
      const NodeId n = as_node_count(value);
      if (auto* req = std::get_if<SolveRequest>(&cfg.model)) {
        req->fixed.n = n;
      } else {
        for (auto& c : std::get<ModelSpec>(cfg.model).components) std::visit([n](auto& p) { p.n = n; }, c);
      }
      break;
    }
    case SweepAxis::K: {
      if (!cfg.property.uses_k()) throw ParameterError("a k sweep needs a property that takes k");
      if (!(value >= 1.0) || value != std::floor(value)) throw ParameterError("sweep: k values must be positive integers");
      cfg.property.k = static_cast<int>(value);
      break;
    }
  }
  return cfg;
}

}  // namespace detail

/// One experiment per axis value. Points share the base seed but use distinct
/// stream offsets; a failing point records its error and the sweep goes on.
inline std::vector<SweepPoint> sweep(const ExperimentConfig& tmpl, SweepAxis axis, const std::vector<double>& values) {
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint pt;
    pt.value = values[i];
    try {
      pt.summary = run_experiment(detail::sweep_point_config(tmpl, axis, values[i], i)).summary;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial,seed,outcome,edges,min_degree,millis\n";
  std::ostringstream ms;
  for (const auto& r : records) {
    os << r.index << ',' << r.seed << ',' << (r.outcome ? 1 : 0) << ',' << r.edges << ',' << r.min_degree << ',';
    if (r.millis) {
      ms.str("");
      ms.precision(6);
      ms << *r.millis;
      os << ms.str();
    }
    os << '\n';
  }
}

inline std::string records_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  write_records_csv(os, records);
  return os.str();
}

/// One row per sweep point. Numbers at full precision; failed points carry
/// only the value and the error text.
inline void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepPoint>& points) {
  os << sweep_axis_name(axis)
     << ",n,trials,successes,empirical,wilson_lo,wilson_hi,implied_deviation,prediction,side_conditions_pass,"
        "audit_violations,error\n";
  std::ostringstream num;
  num.precision(17);
  auto fmt = [&num](double v) {
    num.str("");
    num << v;
    return num.str();
  };
  auto opt = [&fmt](std::optional<double> v) { return v && std::isfinite(*v) ? fmt(*v) : std::string(); };
  for (const auto& p : points) {
    os << fmt(p.value) << ',';
    if (p.summary) {
      const auto& s = *p.summary;
      os << s.n << ',' << s.trials << ',' << s.successes << ',' << fmt(s.empirical) << ',' << fmt(s.wilson.lo) << ','
         << fmt(s.wilson.hi) << ',' << opt(s.implied_deviation()) << ',' << opt(s.prediction()) << ','
         << (s.side_conditions_pass() ? 1 : 0) << ',' << s.audit_violations << ",\n";
    } else {
      std::string err = p.error.value_or("");
      for (auto& ch : err)
        if (ch == '"') ch = '\'';
      os << ",,,,,,,,,,\"" << err << "\"\n";
    }
  }
}

}  // namespace riglab
