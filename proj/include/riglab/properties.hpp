#pragma once

#include <string>
#include <string_view>

#include "riglab/connectivity.hpp"
#include "riglab/decision_budget.hpp"
#include "riglab/error.hpp"
#include "riglab/graph.hpp"
#include "riglab/hamilton.hpp"
#include "riglab/matching.hpp"
#include "riglab/robustness.hpp"

namespace riglab {

/// A graph property; `k` is used by the degree, connectivity and robustness kinds.
struct PropertyKind {
  enum class Tag { MinDegreeAtLeast, KConnected, NearPerfectMatching, HamiltonCycle, KRobust };

  Tag tag = Tag::KConnected;
  int k = 1;

  static PropertyKind min_degree(int k) { return {Tag::MinDegreeAtLeast, k}; }
  static PropertyKind k_connected(int k) { return {Tag::KConnected, k}; }
  static PropertyKind matching() { return {Tag::NearPerfectMatching, 1}; }
  static PropertyKind hamilton() { return {Tag::HamiltonCycle, 1}; }
  static PropertyKind k_robust(int k) { return {Tag::KRobust, k}; }

  [[nodiscard]] bool uses_k() const {
    return tag == Tag::MinDegreeAtLeast || tag == Tag::KConnected || tag == Tag::KRobust;
  }

  void validate() const {
    if (uses_k() && k < 1) throw ParameterError("property k must be a positive integer");
  }

  friend bool operator==(const PropertyKind& a, const PropertyKind& b) {
    return a.tag == b.tag && (!a.uses_k() || a.k == b.k);
  }
};

inline const char* property_name(PropertyKind::Tag tag) {
  switch (tag) {
    case PropertyKind::Tag::MinDegreeAtLeast: return "mindeg";
    case PropertyKind::Tag::KConnected: return "kconn";
    case PropertyKind::Tag::NearPerfectMatching: return "pm";
    case PropertyKind::Tag::HamiltonCycle: return "hamilton";
    case PropertyKind::Tag::KRobust: return "robust";
  }
  return "?";
}

/// Accepts the canonical names plus a few spelled-out aliases.
inline PropertyKind parse_property(std::string_view name, int k) {
  PropertyKind p;
  if (name == "mindeg" || name == "min-degree") {
    p = PropertyKind::min_degree(k);
  } else if (name == "kconn" || name == "connectivity" || name == "k-connectivity") {
    p = PropertyKind::k_connected(k);
  } else if (name == "pm" || name == "matching" || name == "perfect-matching") {
    p = PropertyKind::matching();
  } else if (name == "hamilton" || name == "hc") {
    p = PropertyKind::hamilton();
  } else if (name == "robust" || name == "k-robust") {
    p = PropertyKind::k_robust(k);
  } else {
    throw ParameterError("unknown property '" + std::string(name) +
                         "' (expected mindeg, kconn, pm, hamilton, robust)");
  }
  p.validate();
  return p;
}

inline std::string describe(const PropertyKind& p) {
  std::string s = property_name(p.tag);
  if (p.uses_k()) s += "(k=" + std::to_string(p.k) + ")";
  return s;
}

inline bool evaluate_property(const Graph& g, const PropertyKind& p, const DecisionBudget& budget = {}) {
  p.validate();
  switch (p.tag) {
    case PropertyKind::Tag::MinDegreeAtLeast: return min_degree(g) >= p.k;
    case PropertyKind::Tag::KConnected: return is_k_connected(g, p.k);
    case PropertyKind::Tag::NearPerfectMatching: return has_near_perfect_matching(g);
    case PropertyKind::Tag::HamiltonCycle: return has_hamilton_cycle(g, budget);
    case PropertyKind::Tag::KRobust: return is_k_robust(g, p.k, budget);
  }
  return false;
}

}  // namespace riglab
