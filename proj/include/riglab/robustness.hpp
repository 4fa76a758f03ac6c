#pragma once

// k-robustness, single-subset form: for every non-empty strict subset T of the
// nodes, some node of T has >= k neighbours outside T, or some node outside T
// has >= k neighbours inside T.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riglab/decision_budget.hpp"
#include "riglab/error.hpp"
#include "riglab/graph.hpp"

namespace riglab {

struct RobustnessResult {
  bool robust = true;
  /// A subset T violating the condition, present iff !robust.
  std::optional<NodeSubset> witness;
};

/// Exhaustive check in Gray-code order. The condition is symmetric under
/// T <-> complement(T), so only subsets avoiding the last node are visited.
inline RobustnessResult check_k_robust(const Graph& g, int k, const DecisionBudget& budget = {}) {
  budget.validate();
  if (k < 1) throw ParameterError("is_k_robust: k must be >= 1");
  const NodeId n = g.node_count();
  if (n < 1) throw ParameterError("is_k_robust: graph must have a node");
  if (n > budget.max_exact_nodes) {
    throw BudgetExceeded("k-robustness: n = " + std::to_string(n) + " exceeds the exact-search cap of " +
                         std::to_string(budget.max_exact_nodes));
  }
  if (n == 1) return {};

  std::vector<int> inside_count(static_cast<std::size_t>(n), 0);
  std::vector<char> in_t(static_cast<std::size_t>(n), 0);
  std::vector<char> good(static_cast<std::size_t>(n), 0);
  int good_nodes = 0;
  auto refresh = [&](NodeId v) {
    const bool now = in_t[v] ? (g.degree(v) - inside_count[v] >= k) : (inside_count[v] >= k);
    good_nodes += static_cast<int>(now) - static_cast<int>(good[v]);
    good[v] = static_cast<char>(now);
  };

  const std::uint32_t limit = std::uint32_t{1} << (n - 1);
  std::uint32_t mask = 0;
  for (std::uint32_t step = 1; step < limit; ++step) {
    const int flip = __builtin_ctz(step);
    mask ^= std::uint32_t{1} << flip;
    in_t[flip] ^= 1;
    const int delta = in_t[flip] ? 1 : -1;
    for (NodeId w : g.neighbors(flip)) {
      inside_count[w] += delta;
      refresh(w);
    }
    refresh(flip);
    if (good_nodes == 0) return {false, NodeSubset::from_mask(n, mask)};
  }
  return {};
}

inline bool is_k_robust(const Graph& g, int k, const DecisionBudget& budget = {}) {
  return check_k_robust(g, k, budget).robust;
}

}  // namespace riglab
