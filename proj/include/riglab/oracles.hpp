#pragma once

// Brute-force reference deciders for small graphs. They follow the textbook
// definitions directly and share no code with the production checkers.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riglab/error.hpp"
#include "riglab/graph.hpp"

namespace riglab {

namespace detail {

inline void require_oracle_size(const Graph& g, NodeId cap, const char* what) {
  if (g.node_count() < 1 || g.node_count() > cap) {
    throw ParameterError(std::string(what) + " supports 1 <= n <= " + std::to_string(cap));
  }
}

/// Connectivity of the graph with the nodes in `removed` deleted.
inline bool connected_without(const Graph& g, std::uint32_t removed) {
  const NodeId n = g.node_count();
  NodeId first = -1;
  NodeId remaining = 0;
  for (NodeId v = 0; v < n; ++v)
    if (!((removed >> v) & 1U)) {
      if (first < 0) first = v;
      ++remaining;
    }
  if (remaining <= 1) return true;
  std::uint32_t seen = removed | (std::uint32_t{1} << first);
  std::vector<NodeId> stack{first};
  NodeId reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u))
      if (!((seen >> v) & 1U)) {
        seen |= std::uint32_t{1} << v;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == remaining;
}

inline int best_matching(const Graph& g, std::uint32_t used, NodeId from) {
  const NodeId n = g.node_count();
  while (from < n && ((used >> from) & 1U)) ++from;
  if (from >= n) return 0;
  const std::uint32_t with_from = used | (std::uint32_t{1} << from);
  int best = best_matching(g, with_from, from + 1);  // leave `from` exposed
  for (NodeId v : g.neighbors(from))
    if (!((used >> v) & 1U)) best = std::max(best, 1 + best_matching(g, with_from | (std::uint32_t{1} << v), from + 1));
  return best;
}

inline bool extend_cycle(const Graph& g, std::vector<NodeId>& perm, std::uint32_t used) {
  const NodeId n = g.node_count();
  if (static_cast<NodeId>(perm.size()) == n) return g.has_edge(perm.back(), perm.front());
  for (NodeId v = 1; v < n; ++v) {
    if ((used >> v) & 1U) continue;
    if (!g.has_edge(perm.back(), v)) continue;
    perm.push_back(v);
    if (extend_cycle(g, perm, used | (std::uint32_t{1} << v))) return true;
    perm.pop_back();
  }
  return false;
}

}  // namespace detail

/// Connected, and still connected after deleting any k-1 nodes. Complete
/// graphs are (n-1)-connected; n = 1 is connected only.
inline bool oracle_k_connected(const Graph& g, int k) {
  detail::require_oracle_size(g, 10, "oracle_k_connected");
  if (k < 1) throw ParameterError("oracle_k_connected: k must be >= 1");
  const NodeId n = g.node_count();
  if (n == 1) return k == 1;
  if (k > n - 1) return false;
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t removed = 0; removed <= all; ++removed) {
    if (__builtin_popcount(removed) != k - 1) continue;
    if (!detail::connected_without(g, removed)) return false;
  }
  return true;
}

/// Largest set of pairwise disjoint edges, by exhaustive branching.
inline int oracle_matching(const Graph& g) {
  detail::require_oracle_size(g, 12, "oracle_matching");
  return detail::best_matching(g, 0, 0);
}

/// Scans cyclic orders starting at node 0.
inline bool oracle_hamilton(const Graph& g) {
  detail::require_oracle_size(g, 10, "oracle_hamilton");
  if (g.node_count() < 3) return false;
  std::vector<NodeId> perm{0};
  return detail::extend_cycle(g, perm, 1U);
}

/// Evaluates the robustness condition on every non-empty strict subset.
inline bool oracle_k_robust(const Graph& g, int k) {
  detail::require_oracle_size(g, 14, "oracle_k_robust");
  if (k < 1) throw ParameterError("oracle_k_robust: k must be >= 1");
  const NodeId n = g.node_count();
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t t = 1; t < all; ++t) {
    bool ok = false;
    for (NodeId v = 0; v < n && !ok; ++v) {
      int cross = 0;
      const bool inside = (t >> v) & 1U;
      for (NodeId w : g.neighbors(v)) cross += (((t >> w) & 1U) != 0) != inside;
      ok = cross >= k;
    }
    if (!ok) return false;
  }
  return true;
}

/// Exact count over all ordered pairs of K-subsets of a P-pool: returns
/// (pairs sharing >= s items, all pairs).
inline std::pair<std::uint64_t, std::uint64_t> oracle_uniform_overlap_count(int K, int P, int s) {
  if (P < 1 || P > 16 || K < 0 || K > P) throw ParameterError("oracle_uniform_overlap_count supports 0 <= K <= P <= 16");
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << P); ++m)
    if (__builtin_popcount(m) == K) subsets.push_back(m);
  std::uint64_t hits = 0;
  for (std::uint32_t a : subsets)
    for (std::uint32_t b : subsets) hits += __builtin_popcount(a & b) >= s;
  return {hits, static_cast<std::uint64_t>(subsets.size()) * subsets.size()};
}

/// Sums the probability of every pair of item sets (each item kept with
/// probability t) whose overlap has >= s items.
inline double oracle_binomial_overlap_probability(double t, int P, int s) {
  if (P < 1 || P > 8) throw ParameterError("oracle_binomial_overlap_probability supports 1 <= P <= 8");
  const std::uint32_t full = std::uint32_t{1} << P;
  double total = 0.0;
  for (std::uint32_t a = 0; a < full; ++a)
    for (std::uint32_t b = 0; b < full; ++b) {
      if (__builtin_popcount(a & b) < s) continue;
      double pr = 1.0;
      for (int i = 0; i < P; ++i) {
        pr *= ((a >> i) & 1U) ? t : 1.0 - t;
        pr *= ((b >> i) & 1U) ? t : 1.0 - t;
      }
      total += pr;
    }
  return total;
}

}  // namespace riglab
