#pragma once

// Simple undirected graphs on dense node ids 0..n-1.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "riglab/error.hpp"

namespace riglab {

using NodeId = std::int32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph.
///
/// Neighbors are kept in sorted CSR rows. Graphs with at most
/// `kDenseMembershipLimit` nodes also carry a bit matrix so has_edge is a
/// single word probe; larger graphs binary-search the shorter row.
class Graph {
 public:
  static constexpr NodeId kDenseMembershipLimit = 4096;

  Graph() = default;

  /// Builds from an arbitrary edge list. Duplicates are merged; self-loops and
  /// out-of-range endpoints are rejected.
  static Graph from_edges(NodeId n, std::span<const Edge> edges) {
    if (n < 0) throw ParameterError("graph node count must be non-negative");
    std::vector<std::size_t> deg(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
        throw ParameterError("edge endpoint out of range: " + std::to_string(e.u) + " " +
                             std::to_string(e.v));
      }
      if (e.u == e.v) throw ParameterError("self-loop at node " + std::to_string(e.u));
      ++deg[static_cast<std::size_t>(e.u)];
      ++deg[static_cast<std::size_t>(e.v)];
    }
    Graph g;
    g.n_ = n;
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (NodeId i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    g.adj_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : edges) {
      g.adj_[fill[e.u]++] = e.v;
      g.adj_[fill[e.v]++] = e.u;
    }
    g.sort_and_dedupe();
    g.build_membership();
    return g;
  }

  static Graph empty(NodeId n) { return from_edges(n, {}); }

  static Graph complete(NodeId n) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
    return from_edges(n, edges);
  }

  [[nodiscard]] NodeId node_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return adj_.size() / 2; }

  [[nodiscard]] NodeId degree(NodeId u) const noexcept {
    return static_cast<NodeId>(offsets_[u + 1] - offsets_[u]);
  }

  [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }

  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const noexcept {
    if (u == v) return false;
    if (!bits_.empty()) {
      const std::size_t bit = static_cast<std::size_t>(u) * row_words_ * 64 + v;
      return (bits_[bit >> 6] >> (bit & 63)) & 1U;
    }
    if (degree(u) > degree(v)) std::swap(u, v);
    const auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  /// Canonical edge list: u < v, lexicographically sorted.
  [[nodiscard]] std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < n_; ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.push_back({u, v});
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
  }

 private:
  void sort_and_dedupe() {
    std::size_t write = 0;
    std::size_t row_begin = 0;
    for (NodeId u = 0; u < n_; ++u) {
      const std::size_t lo = row_begin;
      const std::size_t hi = offsets_[u + 1];
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(lo),
                adj_.begin() + static_cast<std::ptrdiff_t>(hi));
      const std::size_t start = write;
      for (std::size_t i = lo; i < hi; ++i) {
        if (i > lo && adj_[i] == adj_[i - 1]) continue;
        adj_[write++] = adj_[i];
      }
      row_begin = hi;
      offsets_[u] = start;
    }
    offsets_[n_] = write;
    adj_.resize(write);
    adj_.shrink_to_fit();
  }

  void build_membership() {
    if (n_ == 0 || n_ > kDenseMembershipLimit) return;
    row_words_ = (static_cast<std::size_t>(n_) + 63) / 64;
    bits_.assign(row_words_ * static_cast<std::size_t>(n_), 0);
    for (NodeId u = 0; u < n_; ++u)
      for (NodeId v : neighbors(u)) {
        const std::size_t bit = static_cast<std::size_t>(u) * row_words_ * 64 + v;
        bits_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
      }
  }

  NodeId n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Membership set over a universe 0..n-1.
class NodeSubset {
 public:
  NodeSubset() = default;
  explicit NodeSubset(NodeId universe)
      : n_(universe), words_((static_cast<std::size_t>(universe) + 63) / 64, 0) {}

  static NodeSubset from_mask(NodeId universe, std::uint64_t mask) {
    NodeSubset s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    return s;
  }

  [[nodiscard]] NodeId universe() const noexcept { return n_; }

  [[nodiscard]] bool contains(NodeId v) const noexcept {
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1U;
  }
  void insert(NodeId v) {
    check(v);
    words_[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void erase(NodeId v) {
    check(v);
    words_[static_cast<std::size_t>(v) >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  [[nodiscard]] std::size_t size() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  [[nodiscard]] std::vector<NodeId> members() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < n_; ++v)
      if (contains(v)) out.push_back(v);
    return out;
  }

  [[nodiscard]] NodeSubset complement() const {
    NodeSubset c(n_);
    for (NodeId v = 0; v < n_; ++v)
      if (!contains(v)) c.insert(v);
    return c;
  }

  friend bool operator==(const NodeSubset&, const NodeSubset&) = default;

 private:
  void check(NodeId v) const {
    if (v < 0 || v >= n_) throw ParameterError("node " + std::to_string(v) + " outside subset universe");
  }

  NodeId n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Edge set intersection of two graphs on the same node set.
inline Graph intersect_graphs(const Graph& g1, const Graph& g2) {
  if (g1.node_count() != g2.node_count()) {
    throw ParameterError("intersect_graphs: node counts differ (" + std::to_string(g1.node_count()) +
                         " vs " + std::to_string(g2.node_count()) + ")");
  }
  std::vector<Edge> common;
  for (NodeId u = 0; u < g1.node_count(); ++u) {
    const auto a = g1.neighbors(u);
    const auto b = g2.neighbors(u);
    auto ia = std::upper_bound(a.begin(), a.end(), u);
    auto ib = std::upper_bound(b.begin(), b.end(), u);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        common.push_back({u, *ia});
        ++ia;
        ++ib;
      }
    }
  }
  return Graph::from_edges(g1.node_count(), common);
}

inline NodeId min_degree(const Graph& g) {
  if (g.node_count() < 1) throw ParameterError("min_degree requires n >= 1");
  NodeId best = g.degree(0);
  for (NodeId u = 1; u < g.node_count() && best > 0; ++u) best = std::min(best, g.degree(u));
  return best;
}

/// Component label per node; labels are 0.. in order of smallest member.
inline std::vector<NodeId> component_labels(const Graph& g, NodeId* count = nullptr) {
  const NodeId n = g.node_count();
  std::vector<NodeId> label(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> queue;
  queue.reserve(static_cast<std::size_t>(n));
  NodeId next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    queue.clear();
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeId v : g.neighbors(queue[head]))
        if (label[v] < 0) {
          label[v] = next;
          queue.push_back(v);
        }
    ++next;
  }
  if (count) *count = next;
  return label;
}

/// Partition of the nodes into maximal connected blocks, each sorted, blocks
/// ordered by their smallest member.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  if (g.node_count() < 1) throw ParameterError("connected_components requires n >= 1");
  NodeId count = 0;
  const auto label = component_labels(g, &count);
  std::vector<std::vector<NodeId>> blocks(static_cast<std::size_t>(count));
  for (NodeId v = 0; v < g.node_count(); ++v) blocks[label[v]].push_back(v);
  return blocks;
}

/// n = 1 counts as connected.
inline bool is_connected(const Graph& g) {
  const NodeId n = g.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  NodeId reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u))
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == n;
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m\n" followed by m lines "u v\n" with u < v.

inline void write_edge_list(std::ostream& os, const Graph& g) {
  const auto edges = g.edges();
  os << g.node_count() << ' ' << edges.size() << '\n';
  for (const auto& e : edges) os << e.u << ' ' << e.v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

namespace detail {

inline bool parse_nonneg(const std::string& tok, long long& out) {
  if (tok.empty() || tok.size() > 18) return false;
  long long v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Reads the edge-list format. Endpoints may appear in either order; the
/// declared edge count must match and duplicate edges are rejected.
inline Graph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::vector<std::string> {
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto toks = detail::split_ws(line);
      if (!toks.empty()) return toks;
    }
    throw ParseError("edge list: unexpected end of input after line " + std::to_string(line_no));
  };
  auto header = next_line();
  long long n = 0;
  long long m = 0;
  if (header.size() != 2 || !detail::parse_nonneg(header[0], n) || !detail::parse_nonneg(header[1], m)) {
    throw ParseError("edge list: header must be \"n m\"");
  }
  if (n > 100'000'000) throw ParseError("edge list: node count too large");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    auto toks = next_line();
    long long u = 0;
    long long v = 0;
    if (toks.size() != 2 || !detail::parse_nonneg(toks[0], u) || !detail::parse_nonneg(toks[1], v)) {
      throw ParseError("edge list: line " + std::to_string(line_no) + " must be \"u v\"");
    }
    if (u >= n || v >= n || u == v) {
      throw ParseError("edge list: invalid edge on line " + std::to_string(line_no));
    }
    if (u > v) std::swap(u, v);
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  while (std::getline(is, line)) {
    ++line_no;
    if (!detail::split_ws(line).empty()) {
      throw ParseError("edge list: trailing content on line " + std::to_string(line_no));
    }
  }
  Graph g = Graph::from_edges(static_cast<NodeId>(n), edges);
  if (g.edge_count() != edges.size()) throw ParseError("edge list: duplicate edges");
  return g;
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  return read_edge_list(is);
}

}  // namespace riglab
