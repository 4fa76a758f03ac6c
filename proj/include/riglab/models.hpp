#pragma once

// Seeded samplers for random intersection graphs, Erdos-Renyi graphs, random
// geometric graphs, and their edge-set intersections.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riglab/error.hpp"
#include "riglab/graph.hpp"
#include "riglab/rng.hpp"

namespace riglab {

using ItemId = std::int64_t;

/// Per-node sorted sets of distinct item ids drawn from a pool [0, P).
struct ItemAssignment {
  NodeId n = 0;
  std::int64_t pool_size = 0;
  std::vector<std::vector<ItemId>> items;
};

/// Uniform model: every node draws exactly K distinct items; edge iff >= s shared.
struct UniformRigParams {
  NodeId n = 0;
  std::int64_t K = 0;
  std::int64_t P = 0;
  int s = 1;

  void validate() const {
    if (n < 1) throw ParameterError("uniform RIG: n must be >= 1");
    if (s < 1) throw ParameterError("uniform RIG: s must be >= 1");
    if (!(s <= K && K <= P)) {
      throw ParameterError("uniform RIG: requires 1 <= s <= K <= P (got s=" + std::to_string(s) +
                           ", K=" + std::to_string(K) + ", P=" + std::to_string(P) + ")");
    }
  }
};

/// Binomial model: each (node, item) pair included independently with probability t.
struct BinomialRigParams {
  NodeId n = 0;
  double t = 0.0;
  std::int64_t P = 0;
  int s = 1;

  void validate() const {
    if (n < 1) throw ParameterError("binomial RIG: n must be >= 1");
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("binomial RIG: t must lie in [0, 1]");
    if (s < 1) throw ParameterError("binomial RIG: s must be >= 1");
    if (P < 1) throw ParameterError("binomial RIG: P must be >= 1");
  }
};

struct ErParams {
  NodeId n = 0;
  double q = 0.0;

  void validate() const {
    if (n < 1) throw ParameterError("ER: n must be >= 1");
    if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("ER: q must lie in [0, 1]");
  }
};

/// Unit-area deployment region. The torus wraps both coordinates.
enum class Region { Torus, Square };

inline const char* region_name(Region r) { return r == Region::Torus ? "torus" : "square"; }

struct RggParams {
  NodeId n = 0;
  double r = 0.0;
  Region region = Region::Torus;

  void validate() const {
    if (n < 1) throw ParameterError("RGG: n must be >= 1");
    if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("RGG: r must be finite and >= 0");
  }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using ModelComponent = std::variant<UniformRigParams, BinomialRigParams, ErParams, RggParams>;

/// A model is the edge-set intersection of independently sampled components on
/// one node set. A single component is a plain family.
struct ModelSpec {
  std::vector<ModelComponent> components;

  [[nodiscard]] NodeId node_count() const {
    if (components.empty()) throw ParameterError("model has no components");
    return std::visit([](const auto& p) { return p.n; }, components.front());
  }

  void validate() const {
    if (components.empty()) throw ParameterError("model has no components");
    const NodeId n = node_count();
    for (const auto& c : components) {
      std::visit([n](const auto& p) {
        p.validate();
        if (p.n != n) throw ParameterError("model components disagree on n");
      }, c);
    }
  }
};

// ---------------------------------------------------------------------------
// Item assignments

namespace detail {

/// K distinct values from [0, P), uniform over all K-subsets (Floyd's algorithm).
/// `table` is scratch space for large K; it is left all -1 on return.
inline std::vector<ItemId> sample_distinct(Rng& rng, std::int64_t K, std::int64_t P, std::vector<ItemId>& table) {
  std::vector<ItemId> chosen;
  chosen.reserve(static_cast<std::size_t>(K));
  if (K <= 48) {
    for (std::int64_t j = P - K; j < P; ++j) {
      const auto t = static_cast<ItemId>(rng.below(static_cast<std::uint64_t>(j) + 1));
      const bool seen = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
      chosen.push_back(seen ? j : t);
    }
  } else {
    // Open addressing; same draws as above, only the membership test differs.
    std::size_t cap = 64;
    while (cap < static_cast<std::size_t>(K) * 2) cap <<= 1;
    if (table.size() != cap) table.assign(cap, -1);
    auto insert = [&table, mask = cap - 1](ItemId x) {
      std::size_t h = static_cast<std::size_t>((static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) >> 20) & mask;
      while (table[h] != -1) {
        if (table[h] == x) return false;
        h = (h + 1) & mask;
      }
      table[h] = x;
      return true;
    };
    for (std::int64_t j = P - K; j < P; ++j) {
      const auto t = static_cast<ItemId>(rng.below(static_cast<std::uint64_t>(j) + 1));
      const ItemId pick = insert(t) ? t : j;
      if (pick == j) insert(j);
      chosen.push_back(pick);
    }
    for (ItemId x : chosen) {
      std::size_t h = static_cast<std::size_t>((static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) >> 20) & (cap - 1);
      while (table[h] != x) h = (h + 1) & (cap - 1);
      table[h] = -1;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace detail

inline ItemAssignment sample_uniform_assignment(const UniformRigParams& p, Rng& rng) {
  p.validate();
  ItemAssignment a{p.n, p.P, {}};
  a.items.reserve(static_cast<std::size_t>(p.n));
  std::vector<ItemId> scratch;
  for (NodeId v = 0; v < p.n; ++v) a.items.push_back(detail::sample_distinct(rng, p.K, p.P, scratch));
  return a;
}

inline ItemAssignment sample_uniform_assignment(const UniformRigParams& p, const RngStream& stream) {
  Rng rng(stream);
  return sample_uniform_assignment(p, rng);
}

inline ItemAssignment sample_binomial_assignment(const BinomialRigParams& p, Rng& rng) {
  p.validate();
  ItemAssignment a{p.n, p.P, std::vector<std::vector<ItemId>>(static_cast<std::size_t>(p.n))};
  if (p.t <= 0.0) return a;
  if (p.t >= 1.0) {
    std::vector<ItemId> all(static_cast<std::size_t>(p.P));
    for (std::int64_t i = 0; i < p.P; ++i) all[i] = i;
    for (auto& s : a.items) s = all;
    return a;
  }
  const double log1m = std::log1p(-p.t);
  for (auto& set : a.items) {
    std::uint64_t pos = rng.geometric_skip(log1m);
    while (pos < static_cast<std::uint64_t>(p.P)) {
      set.push_back(static_cast<ItemId>(pos));
      const std::uint64_t skip = rng.geometric_skip(log1m);
      if (skip >= static_cast<std::uint64_t>(p.P)) break;
      pos += skip + 1;
    }
  }
  return a;
}

inline ItemAssignment sample_binomial_assignment(const BinomialRigParams& p, const RngStream& stream) {
  Rng rng(stream);
  return sample_binomial_assignment(p, rng);
}

/// Graph with an edge between two nodes iff their item sets share >= s items.
///
/// Candidate pairs come from an inverted index (item -> holders), so the cost
/// is proportional to the number of co-holding (node, node, item) triples
/// rather than n^2.
inline Graph build_rig(const ItemAssignment& a, int s) {
  if (s < 1) throw ParameterError("build_rig: s must be >= 1");
  if (static_cast<NodeId>(a.items.size()) != a.n) throw ParameterError("build_rig: assignment size mismatch");

  // Flat incidence f = (node, slot). holder[] lists nodes grouped by item,
  // ascending within a group; pos[f] is f's place in holder[] and end[f] the
  // end of its group.
  std::vector<std::size_t> first(static_cast<std::size_t>(a.n) + 1, 0);
  for (NodeId v = 0; v < a.n; ++v) first[v + 1] = first[v] + a.items[v].size();
  const std::size_t total = first.back();
  std::vector<NodeId> holder(total);
  std::vector<std::size_t> pos(total), end(total);

  if (a.pool_size > 0 && static_cast<std::uint64_t>(a.pool_size) <= 4 * total + 65536) {
    // Counting sort by item.
    std::vector<std::size_t> start(static_cast<std::size_t>(a.pool_size) + 1, 0);
    for (const auto& set : a.items)
      for (ItemId x : set) {
        if (x < 0 || x >= a.pool_size) throw ParameterError("build_rig: item outside the pool");
        ++start[static_cast<std::size_t>(x) + 1];
      }
    for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (NodeId v = 0; v < a.n; ++v)
      for (std::size_t j = 0; j < a.items[v].size(); ++j) {
        const auto x = static_cast<std::size_t>(a.items[v][j]);
        const std::size_t f = first[v] + j;
        pos[f] = fill[x]++;
        end[f] = start[x + 1];
        holder[pos[f]] = v;
      }
  } else {
    struct Inc {
      ItemId item;
      NodeId node;
      std::size_t flat;
    };
    std::vector<Inc> inc;
    inc.reserve(total);
    for (NodeId v = 0; v < a.n; ++v)
      for (std::size_t j = 0; j < a.items[v].size(); ++j) inc.push_back({a.items[v][j], v, first[v] + j});
    std::sort(inc.begin(), inc.end(), [](const Inc& l, const Inc& r) {
      return l.item != r.item ? l.item < r.item : l.node < r.node;
    });
    for (std::size_t i = 0; i < total;) {
      std::size_t j = i;
      while (j < total && inc[j].item == inc[i].item) ++j;
      for (std::size_t k = i; k < j; ++k) {
        holder[k] = inc[k].node;
        pos[inc[k].flat] = k;
        end[inc[k].flat] = j;
      }
      i = j;
    }
  }

  std::vector<int> shared(static_cast<std::size_t>(a.n), 0);
  std::vector<NodeId> touched;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < a.n; ++u) {
    touched.clear();
    for (std::size_t f = first[u]; f < first[u + 1]; ++f) {
      for (std::size_t i = pos[f] + 1; i < end[f]; ++i) {
        const NodeId v = holder[i];
        if (v == u) continue;  // repeated item within one node
        if (shared[v] == 0) touched.push_back(v);
        if (++shared[v] == s) edges.push_back({u, v});
      }
    }
    for (NodeId v : touched) shared[v] = 0;
  }
  return Graph::from_edges(a.n, edges);
}

// ---------------------------------------------------------------------------
// Erdos-Renyi and geometric graphs

inline Graph sample_er(const ErParams& p, Rng& rng) {
  p.validate();
  const NodeId n = p.n;
  if (p.q <= 0.0 || n < 2) return Graph::empty(n);
  if (p.q >= 1.0) return Graph::complete(n);
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  const double log1m = std::log1p(-p.q);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(static_cast<double>(pairs) * p.q * 1.1) + 16);
  // Pairs are indexed row by row: row u holds (u, u+1) .. (u, n-1).
  NodeId u = 0;
  std::uint64_t row_begin = 0;
  std::uint64_t row_len = static_cast<std::uint64_t>(n - 1);
  std::uint64_t idx = rng.geometric_skip(log1m);
  while (idx < pairs) {
    while (idx >= row_begin + row_len) {
      row_begin += row_len;
      ++u;
      --row_len;
    }
    edges.push_back({u, static_cast<NodeId>(u + 1 + static_cast<NodeId>(idx - row_begin))});
    const std::uint64_t skip = rng.geometric_skip(log1m);
    if (skip >= pairs) break;
    idx += skip + 1;
  }
  return Graph::from_edges(n, edges);
}

inline Graph sample_er(const ErParams& p, const RngStream& stream) {
  Rng rng(stream);
  return sample_er(p, rng);
}

/// Squared distance under the region's metric; the torus wraps each coordinate.
inline double squared_distance(const Point& a, const Point& b, Region region) noexcept {
  double dx = std::fabs(a.x - b.x);
  double dy = std::fabs(a.y - b.y);
  if (region == Region::Torus) {
    dx = std::min(dx, 1.0 - dx);
    dy = std::min(dy, 1.0 - dy);
  }
  return dx * dx + dy * dy;
}

/// Disk graph over fixed points: edge iff distance <= r (closed).
inline Graph rgg_from_points(const std::vector<Point>& pts, double r, Region region) {
  const auto n = static_cast<NodeId>(pts.size());
  const double r2 = r * r;
  std::vector<Edge> edges;
  if (r <= 0.0 || n < 2) {
    // r = 0 only links coincident points.
    if (r == 0.0) {
      for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
          if (squared_distance(pts[u], pts[v], region) <= 0.0) edges.push_back({u, v});
    }
    return Graph::from_edges(n, edges);
  }
  const int cells = static_cast<int>(std::floor(1.0 / r));
  if (cells < 3) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (squared_distance(pts[u], pts[v], region) <= r2) edges.push_back({u, v});
    return Graph::from_edges(n, edges);
  }
  // Bucket grid with cell side >= r; only adjacent cells can hold neighbors.
  auto cell_of = [cells](double c) { return std::min(cells - 1, static_cast<int>(c * cells)); };
  std::vector<std::vector<NodeId>> grid(static_cast<std::size_t>(cells) * cells);
  for (NodeId v = 0; v < n; ++v) grid[cell_of(pts[v].x) * cells + cell_of(pts[v].y)].push_back(v);
  for (NodeId u = 0; u < n; ++u) {
    const int cx = cell_of(pts[u].x);
    const int cy = cell_of(pts[u].y);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        int nx = cx + dx;
        int ny = cy + dy;
        if (region == Region::Torus) {
          nx = (nx + cells) % cells;
          ny = (ny + cells) % cells;
        } else if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) {
          continue;
        }
        for (NodeId v : grid[nx * cells + ny])
          if (v > u && squared_distance(pts[u], pts[v], region) <= r2) edges.push_back({u, v});
      }
  }
  return Graph::from_edges(n, edges);
}

inline std::pair<Graph, std::vector<Point>> sample_rgg(const RggParams& p, Rng& rng) {
  p.validate();
  std::vector<Point> pts(static_cast<std::size_t>(p.n));
  for (auto& pt : pts) {
    pt.x = rng.uniform01();
    pt.y = rng.uniform01();
  }
  Graph g = rgg_from_points(pts, p.r, p.region);
  return {std::move(g), std::move(pts)};
}

inline std::pair<Graph, std::vector<Point>> sample_rgg(const RggParams& p, const RngStream& stream) {
  Rng rng(stream);
  return sample_rgg(p, rng);
}

// ---------------------------------------------------------------------------
// Dispatch

inline Graph sample_component(const ModelComponent& c, Rng& rng) {
  struct Visitor {
    Rng& rng;
    Graph operator()(const UniformRigParams& p) const {
      return build_rig(sample_uniform_assignment(p, rng), p.s);
    }
    Graph operator()(const BinomialRigParams& p) const {
      return build_rig(sample_binomial_assignment(p, rng), p.s);
    }
    Graph operator()(const ErParams& p) const { return sample_er(p, rng); }
    Graph operator()(const RggParams& p) const { return sample_rgg(p, rng).first; }
  };
  return std::visit(Visitor{rng}, c);
}

/// Samples every component independently from one stream and intersects them.
inline Graph sample_model(const ModelSpec& spec, const RngStream& stream) {
  spec.validate();
  Rng rng(stream);
  Graph g = sample_component(spec.components.front(), rng);
  for (std::size_t i = 1; i < spec.components.size(); ++i) {
    g = intersect_graphs(g, sample_component(spec.components[i], rng));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Assignment text export: one line per node, "node: item,item,...".

inline void write_assignment(std::ostream& os, const ItemAssignment& a) {
  for (NodeId v = 0; v < a.n; ++v) {
    os << v << ':';
    const auto& set = a.items[v];
    for (std::size_t i = 0; i < set.size(); ++i) os << (i == 0 ? " " : ",") << set[i];
    os << '\n';
  }
}

inline std::string to_assignment_text(const ItemAssignment& a) {
  std::ostringstream os;
  write_assignment(os, a);
  return os.str();
}

}  // namespace riglab
