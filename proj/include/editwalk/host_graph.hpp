#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "editwalk/edge_set.hpp"
#include "editwalk/error.hpp"

namespace editwalk {

using Vertex = std::size_t;

/// Unordered vertex pair, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable host graph. Edges are sorted lexicographically by
/// (min endpoint, max endpoint); an edge's position in that list is its index.
class HostGraph {
 public:
  HostGraph() = default;

  static HostGraph from_edge_list(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs) {
    if (n == 0) fail(Errc::vertex_out_of_range, "host graph needs at least one vertex");
    HostGraph g;
    g.n_ = n;
    g.edges_.reserve(pairs.size());
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n) {
        fail(Errc::vertex_out_of_range, "edge {" + std::to_string(a) + "," + std::to_string(b) +
                                            "} with n = " + std::to_string(n));
      }
      if (a == b) fail(Errc::self_loop, "self-loop at vertex " + std::to_string(a));
      g.edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    if (auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end()); dup != g.edges_.end()) {
      fail(Errc::duplicate_edge,
           "edge {" + std::to_string(dup->u) + "," + std::to_string(dup->v) + "} listed twice");
    }
    g.index_.reserve(g.edges_.size());
    g.degree_.assign(n, 0);
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
      g.index_.emplace(g.key(g.edges_[i].u, g.edges_[i].v), i);
      ++g.degree_[g.edges_[i].u];
      ++g.degree_[g.edges_[i].v];
    }
    return g;
  }

  static HostGraph from_edge_list(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> pairs) {
    std::vector<std::pair<Vertex, Vertex>> v(pairs);
    return from_edge_list(n, std::span<const std::pair<Vertex, Vertex>>(v));
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const Edge& edge(std::size_t i) const {
    if (i >= edges_.size()) fail(Errc::edge_out_of_range, "edge index " + std::to_string(i));
    return edges_[i];
  }

  std::optional<std::size_t> find_edge(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_ || a == b) return std::nullopt;
    auto it = index_.find(key(std::min(a, b), std::max(a, b)));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t edge_index(Vertex a, Vertex b) const {
    check_vertex(a);
    check_vertex(b);
    auto i = find_edge(a, b);
    if (!i) {
      fail(Errc::edge_out_of_range,
           "{" + std::to_string(a) + "," + std::to_string(b) + "} is not a host edge");
    }
    return *i;
  }

  std::size_t degree(Vertex v) const {
    check_vertex(v);
    return degree_[v];
  }

  std::size_t min_degree() const { return *std::min_element(degree_.begin(), degree_.end()); }

  /// N(v): every host edge incident to v.
  EdgeSet neighborhood_edges(Vertex v) const {
    check_vertex(v);
    EdgeSet s(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].u == v || edges_[i].v == v) s.insert(i);
    }
    return s;
  }

  EdgeSet empty_set() const { return EdgeSet(edges_.size()); }
  EdgeSet all_edges() const { return EdgeSet::full(edges_.size()); }

  /// Stable FNV-1a digest of (n, edge list), used to tag emitted artifacts.
  std::uint64_t digest() const noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xFF;
        h *= 1099511628211ULL;
      }
    };
    mix(n_);
    for (const auto& e : edges_) {
      mix(e.u);
      mix(e.v);
    }
    return h;
  }

  friend bool operator==(const HostGraph& a, const HostGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::uint64_t key(Vertex a, Vertex b) const { return static_cast<std::uint64_t>(a) * n_ + b; }

  void check_vertex(Vertex v) const {
    if (v >= n_) {
      fail(Errc::vertex_out_of_range, "vertex " + std::to_string(v) + " with n = " + std::to_string(n_));
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::size_t> degree_;
};

inline HostGraph complete_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  return HostGraph::from_edge_list(n, pairs);
}

/// Parts {0..a-1} and {a..a+b-1}.
inline HostGraph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < a; ++u)
    for (Vertex v = 0; v < b; ++v) pairs.emplace_back(u, a + v);
  return HostGraph::from_edge_list(a + b, pairs);
}

/// Path on n vertices (n - 1 edges).
inline HostGraph path_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u + 1 < n; ++u) pairs.emplace_back(u, u + 1);
  return HostGraph::from_edge_list(n, pairs);
}

/// Cycle on n >= 3 vertices (n edges).
inline HostGraph cycle_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < n; ++u) pairs.emplace_back(u, (u + 1) % n);
  return HostGraph::from_edge_list(n, pairs);
}

/// True when the subgraph (V, E) has no cycle.
inline bool is_forest(const HostGraph& g, const EdgeSet& edges) {
  if (edges.universe() != g.edge_count()) fail(Errc::host_mismatch, "edge set not over this host");
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  bool acyclic = true;
  edges.for_each([&](std::size_t i) {
    auto ru = find(g.edges()[i].u);
    auto rv = find(g.edges()[i].v);
    if (ru == rv) acyclic = false;
    else parent[ru] = rv;
  });
  return acyclic;
}

}  // namespace editwalk
