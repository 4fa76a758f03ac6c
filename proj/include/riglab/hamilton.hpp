#pragma once

// Hamilton cycle containment.
//
// Small graphs (n <= budget.max_exact_nodes) are decided exactly by subset
// dynamic programming. Larger graphs are screened by necessary conditions and
// then searched with Posa rotation-extension; a found cycle is verified before
// it is reported, and an inconclusive search raises BudgetExceeded.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riglab/connectivity.hpp"
#include "riglab/decision_budget.hpp"
#include "riglab/error.hpp"
#include "riglab/graph.hpp"
#include "riglab/rng.hpp"

namespace riglab {

/// True iff `cycle` lists every node once and consecutive entries (cyclically)
/// are adjacent.
inline bool is_hamilton_cycle(const Graph& g, const std::vector<NodeId>& cycle) {
  const NodeId n = g.node_count();
  if (n < 3 || static_cast<NodeId>(cycle.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (NodeId v : cycle) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  for (std::size_t i = 0; i < cycle.size(); ++i)
    if (!g.has_edge(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  return true;
}

enum class HamiltonScreen { Fails, Passes };

/// Necessary conditions: n >= 3, min degree >= 2, connected, no cut node, and
/// no node adjacent to three or more degree-2 nodes.
inline HamiltonScreen hamilton_screen(const Graph& g) {
  const NodeId n = g.node_count();
  if (n < 3) return HamiltonScreen::Fails;
  if (min_degree(g) < 2) return HamiltonScreen::Fails;
  if (!is_connected(g) || has_articulation_point(g)) return HamiltonScreen::Fails;
  for (NodeId v = 0; v < n; ++v) {
    int forced = 0;
    for (NodeId w : g.neighbors(v))
      if (g.degree(w) == 2 && ++forced >= 3) return HamiltonScreen::Fails;
  }
  return HamiltonScreen::Passes;
}

namespace detail {

/// Held-Karp reachability over subsets of nodes 1..n-1 with paths from node 0.
/// reach[S] holds the possible end nodes of a path from 0 covering {0} + S.
inline bool hamilton_subset_dp(const Graph& g) {
  const NodeId n = g.node_count();
  const int m = n - 1;
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);  // over nodes 1..n-1, bit i-1
  for (NodeId v = 1; v < n; ++v)
    for (NodeId w : g.neighbors(v))
      if (w > 0) adj[v] |= std::uint32_t{1} << (w - 1);
  std::uint32_t from_zero = 0;
  for (NodeId w : g.neighbors(0)) from_zero |= std::uint32_t{1} << (w - 1);

  const std::uint32_t full = (m == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << m) - 1);
  std::vector<std::uint32_t> reach(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t set = 1; set <= full; ++set) {
    if ((set & (set - 1)) == 0) {
      reach[set] = set & from_zero;
      continue;
    }
    std::uint32_t ends = 0;
    for (std::uint32_t rest = set; rest; rest &= rest - 1) {
      const int i = __builtin_ctz(rest);
      const std::uint32_t bit = std::uint32_t{1} << i;
      if (reach[set ^ bit] & adj[i + 1]) ends |= bit;
    }
    reach[set] = ends;
    if (set == full) break;
  }
  return (reach[full] & from_zero) != 0;
}

/// Posa rotation-extension search. Returns a verified cycle or nothing.
class RotationExtensionSearch {
 public:
  RotationExtensionSearch(const Graph& g, std::uint64_t seed)
      : g_(g), n_(g.node_count()), pos_(static_cast<std::size_t>(n_), -1), rng_(seed) {}

  std::optional<std::vector<NodeId>> run(std::uint64_t steps_per_attempt, int attempts) {
    for (int attempt = 0; attempt < attempts; ++attempt) {
      if (auto cycle = attempt_once(pick_start(attempt), steps_per_attempt)) return cycle;
    }
    return std::nullopt;
  }

 private:
  NodeId pick_start(int attempt) {
    if (attempt == 0) {
      NodeId best = 0;
      for (NodeId v = 1; v < n_; ++v)
        if (g_.degree(v) > g_.degree(best)) best = v;
      return best;
    }
    return static_cast<NodeId>(rng_.below(static_cast<std::uint64_t>(n_)));
  }

  // Edges at degree-2 nodes belong to every Hamilton cycle; rotations keep them.
  [[nodiscard]] bool forced(NodeId a, NodeId b) const {
    return g_.degree(a) == 2 || g_.degree(b) == 2;
  }

  [[nodiscard]] int free_degree(NodeId v) const {
    int c = 0;
    for (NodeId w : g_.neighbors(v)) c += pos_[w] < 0;
    return c;
  }

  void reverse_suffix(std::size_t from) {
    std::reverse(path_.begin() + static_cast<std::ptrdiff_t>(from), path_.end());
    for (std::size_t i = from; i < path_.size(); ++i) pos_[path_[i]] = static_cast<NodeId>(i);
  }

  bool try_extend() {
    const NodeId end = path_.back();
    NodeId best = -1;
    int best_free = 0;
    int ties = 0;
    for (NodeId w : g_.neighbors(end)) {
      if (pos_[w] >= 0) continue;
      const int f = free_degree(w);
      if (best < 0 || f < best_free) {
        best = w;
        best_free = f;
        ties = 1;
      } else if (f == best_free && rng_.below(static_cast<std::uint64_t>(++ties)) == 0) {
        best = w;
      }
    }
    if (best < 0) return false;
    pos_[best] = static_cast<NodeId>(path_.size());
    path_.push_back(best);
    return true;
  }

  /// One rotation at the current end. Prefers pivots whose new end can extend
  /// (or close the cycle once the path is spanning).
  bool rotate() {
    const NodeId end = path_.back();
    const auto len = path_.size();
    pivots_.clear();
    good_.clear();
    for (NodeId w : g_.neighbors(end)) {
      const auto i = static_cast<std::size_t>(pos_[w]);
      if (i + 2 >= len) continue;
      const NodeId new_end = path_[i + 1];
      if (forced(w, new_end)) continue;
      pivots_.push_back(i);
      const bool useful = (len == static_cast<std::size_t>(n_)) ? g_.has_edge(new_end, path_.front())
                                                                 : free_degree(new_end) > 0;
      if (useful) good_.push_back(i);
    }
    const auto& pool = good_.empty() ? pivots_ : good_;
    if (pool.empty()) return false;
    reverse_suffix(pool[rng_.below(pool.size())] + 1);
    return true;
  }

  std::optional<std::vector<NodeId>> attempt_once(NodeId start, std::uint64_t budget) {
    for (NodeId v : path_) pos_[v] = -1;
    path_.assign(1, start);
    pos_[start] = 0;
    for (std::uint64_t step = 0; step < budget; ++step) {
      if (try_extend()) continue;
      if (path_.size() == static_cast<std::size_t>(n_) && g_.has_edge(path_.back(), path_.front())) {
        if (is_hamilton_cycle(g_, path_)) return path_;
        return std::nullopt;
      }
      // Switch ends when the other end can still grow, or now and then to
      // escape a stale rotation neighbourhood.
      const bool other_end_free = path_.size() < static_cast<std::size_t>(n_) && free_degree(path_.front()) > 0;
      if (other_end_free || rng_.below(16) == 0) {
        std::reverse(path_.begin(), path_.end());
        for (std::size_t i = 0; i < path_.size(); ++i) pos_[path_[i]] = static_cast<NodeId>(i);
        if (other_end_free) continue;
      }
      if (!rotate()) {
        std::reverse(path_.begin(), path_.end());
        for (std::size_t i = 0; i < path_.size(); ++i) pos_[path_[i]] = static_cast<NodeId>(i);
        if (!rotate()) return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const Graph& g_;
  NodeId n_;
  std::vector<NodeId> path_;
  std::vector<NodeId> pos_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> good_;
  Rng rng_;
};

}  // namespace detail

/// Hamilton cycle containment; see the header comment for the decision method.
inline bool has_hamilton_cycle(const Graph& g, const DecisionBudget& budget = {}) {
  budget.validate();
  if (hamilton_screen(g) == HamiltonScreen::Fails) return false;
  const NodeId n = g.node_count();
  if (n <= budget.max_exact_nodes) return detail::hamilton_subset_dp(g);

  const std::uint64_t steps =
      budget.search_steps > 0 ? budget.search_steps : 50 * static_cast<std::uint64_t>(n) + 10000;
  const std::uint64_t seed = derive_seed(static_cast<std::uint64_t>(n), g.edge_count());
  detail::RotationExtensionSearch search(g, seed);
  if (search.run(steps, 6)) return true;
  throw BudgetExceeded("Hamilton cycle undecided: n = " + std::to_string(n) +
                       " exceeds the exact-search cap of " + std::to_string(budget.max_exact_nodes) +
                       " and the rotation-extension search found no cycle");
}

}  // namespace riglab
