#pragma once

// Maximum cardinality matching in general graphs (Edmonds' blossom algorithm).

#include <algorithm>
#include <numeric>
#include <vector>

#include "riglab/error.hpp"
#include "riglab/graph.hpp"

namespace riglab {

/// Maximum matching with its witness. `mate[v]` is v's partner or -1.
struct Matching {
  std::vector<NodeId> mate;
  NodeId size = 0;
};

namespace detail {

/// Blossom search state. Each search touches only the alternating tree it
/// grows, so resets and blossom relabels are proportional to the tree size.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const Graph& g)
      : g_(g),
        n_(g.node_count()),
        mate_(static_cast<std::size_t>(n_), -1),
        parent_(static_cast<std::size_t>(n_), -1),
        base_(static_cast<std::size_t>(n_)),
        even_(static_cast<std::size_t>(n_), 0),
        in_tree_(static_cast<std::size_t>(n_), 0),
        in_blossom_(static_cast<std::size_t>(n_), 0),
        lca_mark_(static_cast<std::size_t>(n_), 0) {
    std::iota(base_.begin(), base_.end(), 0);
  }

  /// Greedy start: lowest-degree nodes first, each paired with its lowest-degree
  /// free neighbor.
  void greedy() {
    std::vector<NodeId> order(static_cast<std::size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return g_.degree(a) < g_.degree(b); });
    for (NodeId u : order) {
      if (mate_[u] >= 0) continue;
      NodeId best = -1;
      for (NodeId v : g_.neighbors(u))
        if (mate_[v] < 0 && (best < 0 || g_.degree(v) < g_.degree(best))) best = v;
      if (best >= 0) {
        mate_[u] = best;
        mate_[best] = u;
      }
    }
  }

  /// Augments from every free node. Stops early once more than
  /// `max_unmatchable` nodes are known to stay exposed; returns false then.
  bool run(NodeId max_unmatchable) {
    NodeId unmatchable = 0;
    for (NodeId root = 0; root < n_; ++root) {
      if (mate_[root] >= 0) continue;
      const NodeId end = find_augmenting_path(root);
      if (end < 0) {
        // A node with no augmenting path now never gains one later.
        if (++unmatchable > max_unmatchable) return false;
        continue;
      }
      for (NodeId v = end; v >= 0;) {
        const NodeId pv = parent_[v];
        const NodeId next = mate_[pv];
        mate_[v] = pv;
        mate_[pv] = v;
        v = next;
      }
      reset_tree();
    }
    return true;
  }

  [[nodiscard]] Matching result() const {
    Matching m{mate_, 0};
    for (NodeId v = 0; v < n_; ++v)
      if (mate_[v] > v) ++m.size;
    return m;
  }

 private:
  void add_to_tree(NodeId v) {
    if (!in_tree_[v]) {
      in_tree_[v] = 1;
      tree_.push_back(v);
    }
  }

  void reset_tree() {
    for (NodeId v : tree_) {
      parent_[v] = -1;
      base_[v] = v;
      even_[v] = 0;
      in_tree_[v] = 0;
    }
    tree_.clear();
  }

  NodeId lowest_common_base(NodeId a, NodeId b) {
    ++lca_epoch_;
    for (;;) {
      a = base_[a];
      lca_mark_[a] = lca_epoch_;
      if (mate_[a] < 0) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (lca_mark_[b] == lca_epoch_) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(NodeId v, NodeId b, NodeId child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = 1;
      in_blossom_[base_[mate_[v]]] = 1;
      touched_blossom_.push_back(base_[v]);
      touched_blossom_.push_back(base_[mate_[v]]);
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  NodeId find_augmenting_path(NodeId root) {
    reset_tree();
    queue_.clear();
    even_[root] = 1;
    add_to_tree(root);
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId v = queue_[head];
      for (NodeId to : g_.neighbors(v)) {
        if (base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] >= 0 && parent_[mate_[to]] >= 0)) {
          const NodeId b = lowest_common_base(v, to);
          mark_path(v, b, to);
          mark_path(to, b, v);
          const std::size_t tree_size = tree_.size();
          for (std::size_t i = 0; i < tree_size; ++i) {
            const NodeId u = tree_[i];
            if (in_blossom_[base_[u]]) {
              base_[u] = b;
              if (!even_[u]) {
                even_[u] = 1;
                queue_.push_back(u);
              }
            }
          }
          for (NodeId x : touched_blossom_) in_blossom_[x] = 0;
          touched_blossom_.clear();
        } else if (parent_[to] < 0) {
          parent_[to] = v;
          add_to_tree(to);
          if (mate_[to] < 0) return to;
          const NodeId m = mate_[to];
          even_[m] = 1;
          add_to_tree(m);
          queue_.push_back(m);
        }
      }
    }
    return -1;
  }

  const Graph& g_;
  NodeId n_;
  std::vector<NodeId> mate_;
  std::vector<NodeId> parent_;
  std::vector<NodeId> base_;
  std::vector<char> even_;
  std::vector<char> in_tree_;
  std::vector<char> in_blossom_;
  std::vector<unsigned> lca_mark_;
  unsigned lca_epoch_ = 0;
  std::vector<NodeId> tree_;
  std::vector<NodeId> queue_;
  std::vector<NodeId> touched_blossom_;
};

}  // namespace detail

/// Maximum cardinality matching; `mate` is a valid witness.
inline Matching maximum_matching(const Graph& g) {
  if (g.node_count() < 1) throw ParameterError("maximum_matching requires n >= 1");
  detail::BlossomMatcher m(g);
  m.greedy();
  m.run(g.node_count());
  return m.result();
}

inline NodeId max_matching_size(const Graph& g) { return maximum_matching(g).size; }

/// A matching covering all nodes except at most one, i.e. of size floor(n/2).
inline bool has_near_perfect_matching(const Graph& g) {
  const NodeId n = g.node_count();
  if (n < 1) throw ParameterError("has_near_perfect_matching requires n >= 1");
  const NodeId allowed_exposed = n % 2;
  NodeId isolated = 0;
  for (NodeId v = 0; v < n; ++v)
    if (g.degree(v) == 0 && ++isolated > allowed_exposed) return false;
  detail::BlossomMatcher m(g);
  m.greedy();
  return m.run(allowed_exposed);
}

}  // namespace riglab
