#pragma once

// Threshold scalings: coupling terms, deviation values, limiting
// probabilities, parameter solving, exact edge probabilities and the advisory
// side conditions attached to each scaling law.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riglab/error.hpp"
#include "riglab/models.hpp"
#include "riglab/properties.hpp"

namespace riglab {

// ---------------------------------------------------------------------------
// Families and their parameters

struct ModelFamily {
  enum class Tag { UniformRig, BinomialRig, Er, UniformRigEr, UniformRigRgg };

  Tag tag = Tag::Er;
  int s = 1;
  Region region = Region::Torus;  // UniformRigRgg only

  static ModelFamily uniform(int s) { return {Tag::UniformRig, s, Region::Torus}; }
  static ModelFamily binomial(int s) { return {Tag::BinomialRig, s, Region::Torus}; }
  static ModelFamily er() { return {Tag::Er, 1, Region::Torus}; }
  static ModelFamily uniform_er(int s) { return {Tag::UniformRigEr, s, Region::Torus}; }
  static ModelFamily uniform_rgg(Region region) { return {Tag::UniformRigRgg, 1, region}; }

  [[nodiscard]] bool uses_s() const { return tag == Tag::UniformRig || tag == Tag::BinomialRig || tag == Tag::UniformRigEr; }

  void validate() const {
    if (s < 1) throw ParameterError("family: s must be >= 1");
    if (tag == Tag::UniformRigRgg && s != 1) throw ParameterError("urig-rgg: only s = 1 is supported");
  }

  friend bool operator==(const ModelFamily& a, const ModelFamily& b) {
    return a.tag == b.tag && (!a.uses_s() || a.s == b.s) && (a.tag != Tag::UniformRigRgg || a.region == b.region);
  }
};

inline const char* family_name(ModelFamily::Tag tag) {
  switch (tag) {
    case ModelFamily::Tag::UniformRig: return "urig";
    case ModelFamily::Tag::BinomialRig: return "brig";
    case ModelFamily::Tag::Er: return "er";
    case ModelFamily::Tag::UniformRigEr: return "urig-er";
    case ModelFamily::Tag::UniformRigRgg: return "urig-rgg";
  }
  return "?";
}

inline ModelFamily parse_family(std::string_view name, int s = 1, Region region = Region::Torus) {
  ModelFamily f;
  if (name == "urig" || name == "uniform") {
    f = ModelFamily::uniform(s);
  } else if (name == "brig" || name == "binomial") {
    f = ModelFamily::binomial(s);
  } else if (name == "er") {
    f = ModelFamily::er();
  } else if (name == "urig-er") {
    f = ModelFamily::uniform_er(s);
  } else if (name == "urig-rgg") {
    f = ModelFamily::uniform_rgg(region);
  } else {
    throw ParameterError("unknown family '" + std::string(name) + "' (expected er, urig, brig, urig-er, urig-rgg)");
  }
  f.validate();
  return f;
}

inline Region parse_region(std::string_view name) {
  if (name == "torus") return Region::Torus;
  if (name == "square") return Region::Square;
  throw ParameterError("unknown region '" + std::string(name) + "' (expected torus or square)");
}

inline std::string describe(const ModelFamily& f) {
  std::string out = family_name(f.tag);
  if (f.uses_s()) out += "(s=" + std::to_string(f.s) + ")";
  if (f.tag == ModelFamily::Tag::UniformRigRgg) out += std::string("(") + region_name(f.region) + ")";
  return out;
}

/// Flat parameter bag; each family reads the fields it needs.
struct FamilyParams {
  NodeId n = 0;
  std::int64_t K = 0;
  std::int64_t P = 0;
  double t = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// The intersection components a family stands for.
inline ModelSpec to_model_spec(const ModelFamily& f, const FamilyParams& p) {
  f.validate();
  ModelSpec spec;
  using T = ModelFamily::Tag;
  switch (f.tag) {
    case T::UniformRig: spec.components = {UniformRigParams{p.n, p.K, p.P, f.s}}; break;
    case T::BinomialRig: spec.components = {BinomialRigParams{p.n, p.t, p.P, f.s}}; break;
    case T::Er: spec.components = {ErParams{p.n, p.q}}; break;
    case T::UniformRigEr: spec.components = {UniformRigParams{p.n, p.K, p.P, f.s}, ErParams{p.n, p.q}}; break;
    case T::UniformRigRgg: spec.components = {UniformRigParams{p.n, p.K, p.P, 1}, RggParams{p.n, p.r, f.region}}; break;
  }
  spec.validate();
  return spec;
}

/// Recognises a spec shaped like one of the families; nullopt otherwise.
inline std::optional<std::pair<ModelFamily, FamilyParams>> family_of(const ModelSpec& spec) {
  const auto& c = spec.components;
  FamilyParams p;
  if (c.size() == 1) {
    if (const auto* u = std::get_if<UniformRigParams>(&c[0])) {
      p.n = u->n, p.K = u->K, p.P = u->P;
      return std::pair{ModelFamily::uniform(u->s), p};
    }
    if (const auto* b = std::get_if<BinomialRigParams>(&c[0])) {
      p.n = b->n, p.t = b->t, p.P = b->P;
      return std::pair{ModelFamily::binomial(b->s), p};
    }
    if (const auto* e = std::get_if<ErParams>(&c[0])) {
      p.n = e->n, p.q = e->q;
      return std::pair{ModelFamily::er(), p};
    }
    return std::nullopt;
  }
  if (c.size() == 2) {
    const auto* u = std::get_if<UniformRigParams>(&c[0]);
    if (u == nullptr) return std::nullopt;
    p.n = u->n, p.K = u->K, p.P = u->P;
    if (const auto* e = std::get_if<ErParams>(&c[1])) {
      p.q = e->q;
      return std::pair{ModelFamily::uniform_er(u->s), p};
    }
    if (const auto* g = std::get_if<RggParams>(&c[1]); g != nullptr && u->s == 1) {
      p.r = g->r;
      return std::pair{ModelFamily::uniform_rgg(g->region), p};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Threshold laws

enum class LimitForm { PoissonKConn, Gumbel, ZeroOneOnly, RggTorus, RggSquare };

inline const char* limit_form_name(LimitForm f) {
  switch (f) {
    case LimitForm::PoissonKConn: return "poisson_kconn";
    case LimitForm::Gumbel: return "gumbel";
    case LimitForm::ZeroOneOnly: return "zero_one_only";
    case LimitForm::RggTorus: return "rgg_torus_zero_one";
    case LimitForm::RggSquare: return "rgg_square_zero_one";
  }
  return "?";
}

/// Critical scaling coupling = (ln n + c ln ln n + deviation) / n and the
/// limit law in the deviation. For the RGG forms the deviation slot carries
/// the constant a (torus) or b (square) instead.
struct ThresholdSpec {
  ModelFamily family;
  PropertyKind property;
  int lnln_coefficient = 0;
  LimitForm limit = LimitForm::Gumbel;
  int k = 1;
  /// The law covers min degree >= k only; k-connectivity is an empirical audit.
  bool predicts_min_degree_only = false;

  [[nodiscard]] bool is_rgg() const { return limit == LimitForm::RggTorus || limit == LimitForm::RggSquare; }
};

/// The law for (family, property), or nullopt when none is known.
inline std::optional<ThresholdSpec> threshold_spec(const ModelFamily& f, const PropertyKind& p) {
  f.validate();
  p.validate();
  using T = ModelFamily::Tag;
  using P = PropertyKind::Tag;
  ThresholdSpec spec{f, p, 0, LimitForm::Gumbel, p.uses_k() ? p.k : 1, false};
  if (f.tag == T::UniformRigRgg) {
    if (p.tag != P::KConnected || p.k != 1) return std::nullopt;
    spec.limit = f.region == Region::Torus ? LimitForm::RggTorus : LimitForm::RggSquare;
    return spec;
  }
  if (f.tag == T::UniformRigEr) {
    if (p.tag != P::KConnected && p.tag != P::MinDegreeAtLeast) return std::nullopt;
    spec.lnln_coefficient = p.k - 1;
    spec.limit = LimitForm::PoissonKConn;
    spec.predicts_min_degree_only = p.tag == P::KConnected && f.s > 1;
    return spec;
  }
  switch (p.tag) {
    case P::MinDegreeAtLeast:
    case P::KConnected:
      spec.lnln_coefficient = p.k - 1;
      spec.limit = LimitForm::PoissonKConn;
      break;
    case P::NearPerfectMatching:
      spec.lnln_coefficient = 0;
      spec.limit = LimitForm::Gumbel;
      break;
    case P::HamiltonCycle:
      spec.lnln_coefficient = 1;
      spec.limit = LimitForm::Gumbel;
      break;
    case P::KRobust:
      spec.lnln_coefficient = p.k - 1;
      spec.limit = LimitForm::ZeroOneOnly;
      break;
  }
  return spec;
}

inline ThresholdSpec require_threshold_spec(const ModelFamily& f, const PropertyKind& p) {
  auto spec = threshold_spec(f, p);
  if (!spec) throw ParameterError("no threshold law for " + describe(p) + " in family " + describe(f));
  return *spec;
}

/// Limit of the property probability when the deviation tends to `deviation`
/// (which may be +-infinity). nullopt means the law does not specify it.
inline std::optional<double> limiting_probability(const ThresholdSpec& spec, double deviation) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (spec.limit) {
    case LimitForm::PoissonKConn:
      if (deviation == -inf) return 0.0;
      if (deviation == inf) return 1.0;
      return std::exp(-std::exp(-deviation - std::lgamma(static_cast<double>(spec.k))));
    case LimitForm::Gumbel:
      if (deviation == -inf) return 0.0;
      if (deviation == inf) return 1.0;
      return std::exp(-std::exp(-deviation));
    case LimitForm::ZeroOneOnly:
      if (deviation == -inf) return 0.0;
      if (deviation == inf) return 1.0;
      return std::nullopt;
    case LimitForm::RggTorus:
    case LimitForm::RggSquare:
      if (deviation < 1.0) return 0.0;
      if (deviation > 1.0) return 1.0;
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact edge probabilities

namespace detail {

inline double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

/// Area of a radius-r disk inside the unit torus (pairs at distance <= r).
inline double torus_disk_probability(double r) {
  if (r <= 0.5) return std::numbers::pi * r * r;
  if (r >= std::sqrt(0.5)) return 1.0;
  return std::numbers::pi * r * r - 4.0 * (r * r * std::acos(0.5 / r) - 0.5 * std::sqrt(r * r - 0.25));
}

/// Distance CDF of two uniform points in the unit square.
inline double square_distance_cdf(double r) {
  if (r <= 0.0) return 0.0;
  if (r <= 1.0) return std::numbers::pi * r * r - 8.0 * r * r * r / 3.0 + r * r * r * r / 2.0;
  if (r >= std::sqrt(2.0)) return 1.0;
  const double r2 = r * r;
  return 1.0 / 3.0 - 2.0 * r2 - r2 * r2 / 2.0 + 4.0 / 3.0 * (2.0 * r2 + 1.0) * std::sqrt(r2 - 1.0) +
         2.0 * r2 * (std::asin(1.0 / r) - std::acos(1.0 / r));
}

}  // namespace detail

/// P[two K-subsets of a P-pool share >= s items]: the hypergeometric upper tail.
/// Term ratios are accumulated in the log domain so large pools keep full
/// relative precision.
inline double uniform_edge_probability(std::int64_t K, std::int64_t P, int s) {
  UniformRigParams{1, K, P, s}.validate();
  const auto Kd = static_cast<double>(K);
  const auto Pd = static_cast<double>(P);
  // Smallest feasible overlap is max(0, 2K - P).
  const std::int64_t first = std::max<std::int64_t>(0, 2 * K - P);
  if (first >= s) return 1.0;
  double log_term = 0.0;
  if (first == 0) {
    for (std::int64_t j = 0; j < K; ++j) log_term += std::log1p(-Kd / (Pd - static_cast<double>(j)));
  } else {
    log_term = detail::log_choose(Kd, static_cast<double>(first)) - detail::log_choose(Pd, Kd);
  }
  std::vector<double> tail;
  for (std::int64_t i = first; i <= K; ++i) {
    if (i >= s) tail.push_back(log_term);
    if (i == K) break;
    const auto id = static_cast<double>(i);
    log_term += 2.0 * std::log(Kd - id) - std::log(id + 1.0) - std::log(Pd - 2.0 * Kd + id + 1.0);
  }
  return std::clamp(std::exp(detail::log_sum_exp(tail)), 0.0, 1.0);
}

/// P[Binomial(P, t^2) >= s].
inline double binomial_edge_probability(double t, std::int64_t P, int s) {
  BinomialRigParams{1, t, P, s}.validate();
  const double p = t * t;
  if (s > P || p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const auto Pd = static_cast<double>(P);
  const double log_odds = std::log(p) - std::log1p(-p);
  auto step = [&](double log_b, std::int64_t i) {
    const auto id = static_cast<double>(i);
    return log_b + std::log(Pd - id) - std::log(id + 1.0) + log_odds;
  };
  double log_b = Pd * std::log1p(-p);
  double lower = 0.0;
  for (std::int64_t i = 0; i < s; ++i) {
    lower += std::exp(log_b);
    log_b = step(log_b, i);
  }
  if (lower <= 0.5) return std::clamp(1.0 - lower, 0.0, 1.0);
  // Mostly below s: sum the upper tail directly until it is negligible.
  const double mode = std::floor((Pd + 1.0) * p);
  double upper = 0.0;
  for (std::int64_t i = s; i <= P; ++i) {
    const double term = std::exp(log_b);
    upper += term;
    if (static_cast<double>(i) > mode && term <= upper * 1e-17) break;
    if (i < P) log_b = step(log_b, i);
  }
  return std::clamp(upper, 0.0, 1.0);
}

/// Marginal probability that a fixed pair of nodes is linked in one component.
inline double component_edge_probability(const ModelComponent& c) {
  struct Visitor {
    double operator()(const UniformRigParams& p) const { return uniform_edge_probability(p.K, p.P, p.s); }
    double operator()(const BinomialRigParams& p) const { return binomial_edge_probability(p.t, p.P, p.s); }
    double operator()(const ErParams& p) const {
      p.validate();
      return p.q;
    }
    double operator()(const RggParams& p) const {
      p.validate();
      return p.region == Region::Torus ? detail::torus_disk_probability(p.r) : detail::square_distance_cdf(p.r);
    }
  };
  return std::visit(Visitor{}, c);
}

/// Components are independent, so the composed probability is the product.
inline double exact_edge_probability(const ModelSpec& spec) {
  spec.validate();
  double prob = 1.0;
  for (const auto& c : spec.components) prob *= component_edge_probability(c);
  return prob;
}

inline double exact_edge_probability(const ModelFamily& f, const FamilyParams& p) {
  return exact_edge_probability(to_model_spec(f, p));
}

// ---------------------------------------------------------------------------
// Couplings and deviations

namespace detail {

inline double uniform_coupling(double K, double P, int s) {
  if (K <= 0.0) return 0.0;
  return std::exp(2.0 * s * std::log(K) - s * std::log(P) - std::lgamma(s + 1.0));
}

inline double binomial_coupling(double t, double P, int s) {
  if (t <= 0.0) return 0.0;
  return std::exp(2.0 * s * std::log(t) + s * std::log(P) - std::lgamma(s + 1.0));
}

inline double rgg_coupling(double r, double K, double P) { return std::numbers::pi * r * r * K * K / P; }

inline void require_n_for_deviation(NodeId n) {
  if (n < 3) throw ParameterError("deviation needs n >= 3 (ln ln n must be positive)");
}

}  // namespace detail

/// The left-hand side of the family's scaling law.
inline double coupling_value(const ModelFamily& f, const FamilyParams& p) {
  to_model_spec(f, p);  // validates
  using T = ModelFamily::Tag;
  switch (f.tag) {
    case T::UniformRig: return detail::uniform_coupling(static_cast<double>(p.K), static_cast<double>(p.P), f.s);
    case T::BinomialRig: return detail::binomial_coupling(p.t, static_cast<double>(p.P), f.s);
    case T::Er: return p.q;
    case T::UniformRigEr: return uniform_edge_probability(p.K, p.P, f.s) * p.q;
    case T::UniformRigRgg: return detail::rgg_coupling(p.r, static_cast<double>(p.K), static_cast<double>(p.P));
  }
  return 0.0;
}

/// ln n + c ln ln n: the critical value of n * coupling.
inline double critical_level(const ThresholdSpec& spec, NodeId n) {
  detail::require_n_for_deviation(n);
  const double ln_n = std::log(static_cast<double>(n));
  return ln_n + spec.lnln_coefficient * std::log(ln_n);
}

/// n * coupling - ln n - c ln ln n. Not meaningful for the RGG laws.
inline double deviation_from_coupling(const ThresholdSpec& spec, NodeId n, double coupling) {
  if (spec.is_rgg()) throw ParameterError("deviation_from_coupling: RGG laws use a or b; see deviation_from_params");
  return static_cast<double>(n) * coupling - critical_level(spec, n);
}

/// Piecewise square-region denominator; the first branch applies when
/// K^2/P > 1 / (n^(1/3) ln n).
inline double rgg_square_denominator(std::int64_t K, std::int64_t P, NodeId n) {
  const double x = static_cast<double>(K) * static_cast<double>(K) / static_cast<double>(P);
  const auto nd = static_cast<double>(n);
  const double split = 1.0 / (std::cbrt(nd) * std::log(nd));
  if (x > split) return std::log(nd / x) / nd;
  return 4.0 * std::log(1.0 / x) / nd;
}

/// b = (pi r^2 K^2 / P) / D(n). Infinite when D(n) is not positive.
inline double rgg_square_threshold(std::int64_t K, std::int64_t P, double r, NodeId n) {
  UniformRigParams{n, K, P, 1}.validate();
  if (n < 2) throw ParameterError("rgg_square_threshold: n must be >= 2");
  const double d = rgg_square_denominator(K, P, n);
  const double c = detail::rgg_coupling(r, static_cast<double>(K), static_cast<double>(P));
  if (d <= 0.0) return c > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return c / d;
}

/// The deviation implied by concrete parameters. For the RGG laws this is a
/// (torus) or b (square).
inline double deviation_from_params(const ThresholdSpec& spec, const FamilyParams& p) {
  detail::require_n_for_deviation(p.n);
  const double coupling = coupling_value(spec.family, p);
  switch (spec.limit) {
    case LimitForm::RggTorus: return static_cast<double>(p.n) * coupling / std::log(static_cast<double>(p.n));
    case LimitForm::RggSquare: return rgg_square_threshold(p.K, p.P, p.r, p.n);
    default: return deviation_from_coupling(spec, p.n, coupling);
  }
}

// ---------------------------------------------------------------------------
// Solving for a free parameter

enum class FreeParam { K, t, q, r };

inline const char* free_param_name(FreeParam f) {
  switch (f) {
    case FreeParam::K: return "K";
    case FreeParam::t: return "t";
    case FreeParam::q: return "q";
    case FreeParam::r: return "r";
  }
  return "?";
}

inline FreeParam parse_free_param(std::string_view name) {
  if (name == "K") return FreeParam::K;
  if (name == "t") return FreeParam::t;
  if (name == "q") return FreeParam::q;
  if (name == "r") return FreeParam::r;
  throw ParameterError("unknown free parameter '" + std::string(name) + "' (expected K, t, q or r)");
}

/// The parameter each family solves for.
inline FreeParam default_free_param(const ModelFamily& f) {
  using T = ModelFamily::Tag;
  switch (f.tag) {
    case T::UniformRig: return FreeParam::K;
    case T::BinomialRig: return FreeParam::t;
    case T::Er: return FreeParam::q;
    case T::UniformRigEr: return FreeParam::q;
    case T::UniformRigRgg: return FreeParam::r;
  }
  return FreeParam::q;
}

struct SolveCandidate {
  FamilyParams params;
  double value = 0.0;
  double implied_deviation = 0.0;
};

struct SolveResult {
  FreeParam param = FreeParam::q;
  double target_deviation = 0.0;
  double real_value = 0.0;
  /// The solution fell below the parameter's domain and was raised to its floor.
  bool clamped = false;
  std::vector<SolveCandidate> candidates;
  std::size_t chosen = 0;

  [[nodiscard]] const SolveCandidate& best() const { return candidates.at(chosen); }
};

/// Solves the scaling law for the family's free parameter at the target
/// deviation, holding the other fields of `fixed` constant. K is rounded down
/// and up; every candidate carries the deviation it actually implies, and the
/// candidate closest to the target is chosen.
inline SolveResult solve_param(const ThresholdSpec& spec, const FamilyParams& fixed, double target,
                               std::optional<FreeParam> free = std::nullopt) {
  const ModelFamily& f = spec.family;
  const FreeParam param = free.value_or(default_free_param(f));
  if (param != default_free_param(f)) {
    throw ParameterError(std::string("solve: family ") + family_name(f.tag) + " solves for " +
                         free_param_name(default_free_param(f)) + ", not " + free_param_name(param));
  }
  if (!std::isfinite(target)) throw ParameterError("solve: target deviation must be finite");
  detail::require_n_for_deviation(fixed.n);
  const auto n = static_cast<double>(fixed.n);
  const auto P = static_cast<double>(fixed.P);

  SolveResult out;
  out.param = param;
  out.target_deviation = target;
  auto add = [&](FamilyParams p, double value) {
    out.candidates.push_back({p, value, deviation_from_params(spec, p)});
  };

  if (spec.is_rgg()) {
    if (fixed.K < 1 || fixed.P < fixed.K) throw ParameterError("solve: urig-rgg needs 1 <= K <= P");
    const double x = static_cast<double>(fixed.K) * static_cast<double>(fixed.K) / P;
    const double level = spec.limit == LimitForm::RggTorus ? std::log(n) / n
                                                           : rgg_square_denominator(fixed.K, fixed.P, fixed.n);
    const double rhs = target * level;
    FamilyParams p = fixed;
    if (rhs <= 0.0) {
      out.clamped = true;
      p.r = 0.0;
    } else {
      p.r = std::sqrt(rhs / (std::numbers::pi * x));
    }
    out.real_value = p.r;
    add(p, p.r);
    return out;
  }

  const double rhs = (critical_level(spec, fixed.n) + target) / n;  // required coupling
  const int s = f.s;
  FamilyParams p = fixed;
  switch (f.tag) {
    case ModelFamily::Tag::Er:
    case ModelFamily::Tag::UniformRigEr: {
      const double base = f.tag == ModelFamily::Tag::Er ? 1.0 : uniform_edge_probability(fixed.K, fixed.P, s);
      if (rhs <= 0.0) {
        out.clamped = true;
        p.q = 0.0;
      } else {
        if (base <= 0.0) throw ParameterError("solve: key-sharing edge probability is zero");
        p.q = rhs / base;
      }
      if (p.q > 1.0) {
        throw ParameterError("solve: required q = " + std::to_string(p.q) + " exceeds 1");
      }
      out.real_value = p.q;
      add(p, p.q);
      return out;
    }
    case ModelFamily::Tag::BinomialRig: {
      if (fixed.P < 1) throw ParameterError("solve: P must be >= 1");
      if (rhs <= 0.0) {
        out.clamped = true;
        p.t = 0.0;
      } else {
        p.t = std::exp((std::log(rhs) + std::lgamma(s + 1.0) - s * std::log(P)) / (2.0 * s));
      }
      if (p.t > 1.0) throw ParameterError("solve: required t = " + std::to_string(p.t) + " exceeds 1");
      out.real_value = p.t;
      add(p, p.t);
      return out;
    }
    case ModelFamily::Tag::UniformRig: {
      if (fixed.P < s) throw ParameterError("solve: P must be >= s");
      double k_real = 0.0;
      if (rhs > 0.0) k_real = std::exp((std::log(rhs) + std::lgamma(s + 1.0) + s * std::log(P)) / (2.0 * s));
      out.real_value = k_real;
      if (k_real > P) {
        throw ParameterError("solve: required K = " + std::to_string(k_real) + " exceeds P");
      }
      auto lo = static_cast<std::int64_t>(std::floor(k_real));
      auto hi = static_cast<std::int64_t>(std::ceil(k_real));
      if (hi < s) {
        out.clamped = true;
        lo = hi = s;
      }
      lo = std::max<std::int64_t>(lo, s);
      hi = std::min<std::int64_t>(hi, fixed.P);
      for (std::int64_t K = lo; K <= hi; ++K) {
        p.K = K;
        add(p, static_cast<double>(K));
      }
      break;
    }
    case ModelFamily::Tag::UniformRigRgg: break;  // handled above
  }
  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    if (std::fabs(out.candidates[i].implied_deviation - target) <
        std::fabs(out.candidates[out.chosen].implied_deviation - target)) {
      out.chosen = i;
    }
  }
  return out;
}

/// The real-valued coupling at a solved free parameter (no rounding).
inline double coupling_at_real_solution(const ThresholdSpec& spec, const FamilyParams& fixed, double value) {
  const ModelFamily& f = spec.family;
  using T = ModelFamily::Tag;
  switch (f.tag) {
    case T::UniformRig: return detail::uniform_coupling(value, static_cast<double>(fixed.P), f.s);
    case T::BinomialRig: return detail::binomial_coupling(value, static_cast<double>(fixed.P), f.s);
    case T::Er: return value;
    case T::UniformRigEr: return uniform_edge_probability(fixed.K, fixed.P, f.s) * value;
    case T::UniformRigRgg:
      return detail::rgg_coupling(value, static_cast<double>(fixed.K), static_cast<double>(fixed.P));
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Side conditions

/// One asymptotic requirement rendered as a finite-n ratio compared against a
/// fixed proxy threshold. Advisory only.
struct SideCondition {
  std::string requirement;  // the asymptotic statement, e.g. "P = omega(n (ln n)^5)"
  std::string ratio_name;   // what `ratio` measures
  double ratio = 0.0;
  double threshold = 0.0;
  bool at_least = true;  // passes iff ratio >= threshold (else ratio <= threshold)
  bool passes = true;
};

namespace detail {

// Proxies: Omega(x) -> ratio >= 1, omega(x) -> ratio >= 10, O(x) -> ratio <= 1,
// o(x) -> ratio <= 0.1.
inline SideCondition make_condition(std::string requirement, std::string ratio_name, double ratio, double threshold,
                                    bool at_least) {
  const bool ok = at_least ? ratio >= threshold : ratio <= threshold;
  return {std::move(requirement), std::move(ratio_name), ratio, threshold, at_least, ok};
}

inline SideCondition pool_omega_n(double P, double n) {
  return make_condition("P = Omega(n)", "P/n", P / n, 1.0, true);
}

inline SideCondition pool_log5(double P, double n, bool little_omega) {
  const double l = std::log(n);
  return make_condition(little_omega ? "P = omega(n (ln n)^5)" : "P = Omega(n (ln n)^5)", "P/(n (ln n)^5)",
                        P / (n * std::pow(l, 5.0)), little_omega ? 10.0 : 1.0, true);
}

inline SideCondition pool_power(double P, double n, double c_min) {
  return make_condition("P = Omega(n^c), c > " + std::to_string(c_min), "ln P / ln n", std::log(P) / std::log(n),
                        c_min, true);
}

}  // namespace detail

inline std::vector<SideCondition> side_conditions(const ModelFamily& f, const FamilyParams& p,
                                                  const PropertyKind& prop) {
  using T = ModelFamily::Tag;
  using Pr = PropertyKind::Tag;
  std::vector<SideCondition> out;
  if (p.n < 2) return out;
  const auto n = static_cast<double>(p.n);
  const auto P = static_cast<double>(p.P);
  const auto K = static_cast<double>(p.K);
  const double ln_n = std::log(n);
  const bool conn_like = prop.tag == Pr::KConnected || prop.tag == Pr::MinDegreeAtLeast;

  switch (f.tag) {
    case T::Er: break;
    case T::UniformRig:
      if (f.s > 1) {
        out.push_back(detail::pool_power(P, n, 2.0 - 1.0 / f.s));
      } else if (conn_like) {
        out.push_back(detail::pool_omega_n(P, n));
      } else {
        out.push_back(detail::pool_log5(P, n, prop.tag != Pr::KRobust));
      }
      break;
    case T::BinomialRig:
      if (f.s > 1) {
        out.push_back(detail::pool_power(P, n, 2.0 - 1.0 / f.s));
      } else if (prop.tag == Pr::NearPerfectMatching) {
        out.push_back(detail::pool_power(P, n, 1.0));
      } else {
        out.push_back(detail::pool_log5(P, n, prop.tag != Pr::KRobust));
      }
      break;
    case T::UniformRigEr:
      out.push_back(detail::pool_omega_n(P, n));
      out.push_back(detail::make_condition("K/P = o(1)", "K/P", K / P, 0.1, false));
      break;
    case T::UniformRigRgg: {
      const double x = K * K / P;
      out.push_back(detail::make_condition("K = omega(ln n)", "K/ln n", K / ln_n, 10.0, true));
      out.push_back(detail::make_condition("K^2/P = O(1/ln n)", "(K^2/P) ln n", x * ln_n, 1.0, false));
      out.push_back(detail::make_condition("K^2/P = omega(ln n/n)", "(K^2/P)/(ln n/n)", x / (ln_n / n), 10.0, true));
      out.push_back(detail::make_condition("K/P = o(1/n)", "K n/P", K * n / P, 0.1, false));
      break;
    }
  }
  return out;
}

inline bool all_pass(const std::vector<SideCondition>& conds) {
  return std::all_of(conds.begin(), conds.end(), [](const SideCondition& c) { return c.passes; });
}

// ---------------------------------------------------------------------------
// Reports

/// Everything the scaling law says about one concrete parameter setting.
struct CouplingReport {
  ModelFamily family;
  PropertyKind property;
  FamilyParams params;
  double coupling = 0.0;
  double edge_probability = 0.0;
  std::optional<ThresholdSpec> spec;
  std::optional<double> deviation;   // present when a law applies and n >= 3
  std::optional<double> prediction;  // limiting probability at `deviation`
  std::vector<SideCondition> side_conditions;
};

inline CouplingReport coupling_report(const ModelFamily& f, const FamilyParams& p, const PropertyKind& prop) {
  CouplingReport rep{f, prop, p, coupling_value(f, p), exact_edge_probability(f, p), threshold_spec(f, prop),
                     std::nullopt, std::nullopt, side_conditions(f, p, prop)};
  if (rep.spec && p.n >= 3) {
    rep.deviation = deviation_from_params(*rep.spec, p);
    rep.prediction = limiting_probability(*rep.spec, *rep.deviation);
  }
  return rep;
}

}  // namespace riglab
