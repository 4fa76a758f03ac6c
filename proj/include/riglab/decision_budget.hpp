#pragma once

#include <cstdint>
#include <string>

#include "riglab/error.hpp"
#include "riglab/graph.hpp"

namespace riglab {

/// Limits for the exponential-time checkers.
///
/// Hamiltonicity and k-robustness are decided exactly by exhaustive methods
/// for graphs with at most `max_exact_nodes` nodes. Beyond that, Hamiltonicity
/// falls back to a certifying search that may spend at most `search_steps`
/// rotation steps per attempt (0 picks a size-proportional default); it can
/// only answer when it finds a cycle or a necessary condition fails, and
/// raises BudgetExceeded otherwise.
struct DecisionBudget {
  NodeId max_exact_nodes = 24;
  std::uint64_t search_steps = 0;

  void validate() const {
    if (max_exact_nodes < 1 || max_exact_nodes > 26) {
      throw ParameterError("decision budget: max_exact_nodes must lie in [1, 26]");
    }
  }
};

}  // namespace riglab
