#pragma once

// Exact vertex k-connectivity.
//
// A graph is k-connected when every pair of nodes is joined by at least k
// internally node-disjoint paths. The complete graph on n nodes counts as
// (n-1)-connected, and the single-node graph counts as connected (k = 1) only.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "riglab/error.hpp"
#include "riglab/graph.hpp"

namespace riglab {

/// True iff removing some single node disconnects a connected graph.
inline bool has_articulation_point(const Graph& g) {
  const NodeId n = g.node_count();
  if (n < 3) return false;
  std::vector<NodeId> disc(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> low(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> parent(static_cast<std::size_t>(n), -1);
  std::vector<std::size_t> next_edge(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> stack;
  NodeId timer = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    NodeId root_children = 0;
    disc[root] = low[root] = timer++;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      const auto nbrs = g.neighbors(u);
      if (next_edge[u] < nbrs.size()) {
        const NodeId v = nbrs[next_edge[u]++];
        if (disc[v] < 0) {
          parent[v] = u;
          disc[v] = low[v] = timer++;
          if (u == root) ++root_children;
          stack.push_back(v);
        } else if (v != parent[u]) {
          low[u] = std::min(low[u], disc[v]);
        }
      } else {
        stack.pop_back();
        const NodeId p = parent[u];
        if (p >= 0) {
          low[p] = std::min(low[p], low[u]);
          if (p != root && low[u] >= disc[p]) return true;
        }
      }
    }
    if (root_children > 1) return true;
  }
  return false;
}

namespace detail {

/// Counts internally node-disjoint paths from a source node to a set of sink
/// nodes by unit-capacity augmentation on the node-split residual graph.
/// With `shared_sink` the (single) sink may end any number of paths; otherwise
/// each sink ends at most one. State 2v is v's entry, 2v+1 its exit.
class DisjointPathCounter {
 public:
  explicit DisjointPathCounter(const Graph& g)
      : g_(g),
        pred_(static_cast<std::size_t>(g.node_count()), -1),
        succ_(static_cast<std::size_t>(g.node_count()), -1),
        stamp_(2 * static_cast<std::size_t>(g.node_count()), 0),
        parent_(2 * static_cast<std::size_t>(g.node_count()), -1) {}

  /// Number of disjoint paths found, stopping once `limit` is reached.
  int count(NodeId source, const std::vector<char>& is_sink, int limit, bool shared_sink = false) {
    shared_sink_ = shared_sink;
    int found = 0;
    while (found < limit && augment(source, is_sink)) ++found;
    for (NodeId v : touched_) pred_[v] = succ_[v] = -1;
    touched_.clear();
    return found;
  }

 private:
  bool augment(NodeId source, const std::vector<char>& is_sink) {
    ++epoch_;
    queue_.clear();
    const std::int64_t start = 2 * static_cast<std::int64_t>(source) + 1;
    visit(start, -1);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::int64_t state = queue_[head];
      const auto v = static_cast<NodeId>(state / 2);
      if (state % 2 == 1) {
        for (NodeId w : g_.neighbors(v)) {
          if (w == source || saturated(v, w, source)) continue;
          const std::int64_t next = 2 * static_cast<std::int64_t>(w);
          if (stamp_[next] == epoch_) continue;
          visit(next, state);
          if (is_sink[w] && (shared_sink_ || pred_[w] < 0)) {
            apply(next, source);
            return true;
          }
        }
        if (v != source && pred_[v] >= 0) visit_if_new(state - 1, state);
      } else {
        if (pred_[v] < 0) {
          if (!is_sink[v]) visit_if_new(state + 1, state);
        } else {
          visit_if_new(2 * static_cast<std::int64_t>(pred_[v]) + 1, state);
        }
      }
    }
    return false;
  }

  [[nodiscard]] bool saturated(NodeId v, NodeId w, NodeId source) const {
    return v == source ? pred_[w] == source : succ_[v] == w;
  }

  void visit(std::int64_t state, std::int64_t from) {
    stamp_[state] = epoch_;
    parent_[state] = from;
    queue_.push_back(state);
  }
  void visit_if_new(std::int64_t state, std::int64_t from) {
    if (stamp_[state] != epoch_) visit(state, from);
  }

  void apply(std::int64_t sink_state, NodeId source) {
    removals_.clear();
    additions_.clear();
    for (std::int64_t s = sink_state; parent_[s] >= 0; s = parent_[s]) {
      const std::int64_t p = parent_[s];
      const auto a = static_cast<NodeId>(p / 2);
      const auto b = static_cast<NodeId>(s / 2);
      if (a == b) continue;
      if (p % 2 == 1) {
        additions_.push_back({a, b});  // exit(a) -> entry(b): flow a -> b
      } else {
        removals_.push_back({b, a});  // entry(a) -> exit(b): cancel b -> a
      }
    }
    for (const auto& e : removals_) {
      pred_[e.v] = -1;
      if (e.u != source) succ_[e.u] = -1;
    }
    for (const auto& e : additions_) {
      if (!(shared_sink_ && e.v == static_cast<NodeId>(sink_state / 2))) {
        pred_[e.v] = e.u;
        touched_.push_back(e.v);
      }
      if (e.u != source) {
        succ_[e.u] = e.v;
        touched_.push_back(e.u);
      }
    }
  }

  const Graph& g_;
  std::vector<NodeId> pred_;
  std::vector<NodeId> succ_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::int64_t> parent_;
  std::vector<std::int64_t> queue_;
  std::vector<NodeId> touched_;
  std::vector<Edge> removals_;
  std::vector<Edge> additions_;
  std::uint32_t epoch_ = 0;
  bool shared_sink_ = false;
};

inline std::vector<NodeId> bfs_order_from_max_degree(const Graph& g) {
  const NodeId n = g.node_count();
  NodeId start = 0;
  for (NodeId v = 1; v < n; ++v)
    if (g.degree(v) > g.degree(start)) start = v;
  std::vector<NodeId> order{start};
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[start] = 1;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (NodeId w : g.neighbors(order[head]))
      if (!seen[w]) {
        seen[w] = 1;
        order.push_back(w);
      }
  return order;
}

}  // namespace detail

/// Exact test of vertex connectivity >= k.
///
/// Uses cheap necessary conditions first (k <= n-1, min degree >= k,
/// connectivity), a linear articulation-point scan for k = 2, and for larger k
/// Even's pair cover: the first k nodes of an ordering are tested pairwise,
/// then each later node is tested against the set of all earlier nodes, with
/// k disjoint paths required each time.
inline bool is_k_connected(const Graph& g, int k) {
  if (k < 1) throw ParameterError("is_k_connected: k must be >= 1");
  const NodeId n = g.node_count();
  if (n < 1) throw ParameterError("is_k_connected: graph must have a node");
  if (n == 1) return k == 1;
  if (k > n - 1) return false;
  if (min_degree(g) < k) return false;
  if (g.edge_count() == static_cast<std::size_t>(n) * (n - 1) / 2) return true;
  if (!is_connected(g)) return false;
  if (k == 1) return true;
  if (k == 2) return !has_articulation_point(g);

  const auto order = detail::bfs_order_from_max_degree(g);
  detail::DisjointPathCounter counter(g);
  std::vector<char> is_sink(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const NodeId a = order[i];
      const NodeId b = order[j];
      if (g.has_edge(a, b)) continue;
      is_sink[a] = 1;
      const int paths = counter.count(b, is_sink, k, /*shared_sink=*/true);
      is_sink[a] = 0;
      if (paths < k) return false;
    }
  }
  std::vector<char> earlier(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < k; ++i) earlier[order[i]] = 1;
  for (NodeId j = k; j < n; ++j) {
    const NodeId v = order[j];
    int direct = 0;
    for (NodeId w : g.neighbors(v)) direct += earlier[w];
    if (direct < k && counter.count(v, earlier, k) < k) return false;
    earlier[v] = 1;
  }
  return true;
}

}  // namespace riglab
