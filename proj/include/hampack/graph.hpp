#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hampack/error.hpp"

namespace hampack {

/// Vertex ids are dense integers 0..n-1.
using Vertex = std::int32_t;

/// Undirected edge in canonical order (u < v).
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  constexpr Edge() = default;
  /// Canonicalizes the endpoint order; throws InvalidArgument on a loop.
  Edge(Vertex a, Vertex b);

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
};

std::uint64_t edge_key(const Edge& e) noexcept;

/// Immutable simple undirected graph stored as a compressed adjacency array
/// with sorted neighbor lists.
class Graph {
 public:
  Graph() = default;
  /// Edgeless graph on n vertices.
  explicit Graph(Vertex n);

  /// Builds a graph from an edge list; duplicate edges collapse into one.
  /// Throws InvalidArgument on loops or out-of-range endpoints.
  static Graph from_edges(Vertex n, std::span<const Edge> edges);

  [[nodiscard]] Vertex vertex_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return adj_.size() / 2; }

  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  [[nodiscard]] std::size_t degree(Vertex v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  [[nodiscard]] bool has_edge(Vertex u, Vertex v) const noexcept;

  /// delta(G); 0 for the graph on zero vertices.
  [[nodiscard]] std::size_t min_degree() const noexcept;
  /// Delta(G).
  [[nodiscard]] std::size_t max_degree() const noexcept;

  /// All edges in canonical lexicographic order.
  [[nodiscard]] std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Vertex n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
};

/// Accumulates edges on a fixed vertex universe and freezes them into a Graph.
class GraphBuilder {
 public:
  explicit GraphBuilder(Vertex n) : n_(n) {}

  void add_edge(Vertex a, Vertex b) { edges_.emplace_back(a, b); }
  void add_edge(const Edge& e) { edges_.push_back(e); }
  void reserve(std::size_t m) { edges_.reserve(m); }
  [[nodiscard]] Vertex vertex_count() const noexcept { return n_; }

  [[nodiscard]] Graph build() const { return Graph::from_edges(n_, edges_); }

 private:
  Vertex n_;
  std::vector<Edge> edges_;
};

// Graph algebra on a shared vertex universe. Mismatched vertex counts throw
// InvalidArgument.
Graph graph_union(const Graph& g, const Graph& h);
Graph graph_minus(const Graph& g, const Graph& h);
Graph graph_intersection(const Graph& g, const Graph& h);

/// Subgraph induced by `keep`, on the same universe (other vertices isolated).
Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep);

/// Sum of degrees; equals twice the edge count for every valid Graph.
std::size_t degree_sum(const Graph& g) noexcept;

struct EdgeStats {
  std::size_t e_x = 0;               ///< edges with both ends in X
  std::size_t e_xy = 0;              ///< edges with one end in X and one in Y
  std::vector<Vertex> neighborhood;  ///< external neighborhood N(U), sorted
};

/// e_G(X), e_G(X, Y) and N_G(U) in one pass. X and Y must be disjoint.
EdgeStats edge_stats(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y,
                     std::span<const Vertex> u);

/// External neighborhood N_G(U) = {w not in U : w adjacent to some u in U}.
std::vector<Vertex> external_neighborhood(const Graph& g, std::span<const Vertex> u);

/// Number of edges with both endpoints in `a`.
std::size_t edges_inside(const Graph& g, std::span<const Vertex> a);

/// Balanced-or-not bipartite graph between two disjoint vertex lists. Algorithms
/// address vertices by local index: left i in [0, |A|), right j in [0, |B|).
class BipartitePair {
 public:
  BipartitePair() = default;
  /// Every edge must have exactly one endpoint on each side; sides disjoint.
  BipartitePair(std::vector<Vertex> left, std::vector<Vertex> right,
                std::span<const Edge> cross_edges);

  /// The bipartite subgraph of g between `left` and `right`.
  static BipartitePair induced(const Graph& g, std::span<const Vertex> left,
                               std::span<const Vertex> right);

  [[nodiscard]] const std::vector<Vertex>& left() const noexcept { return left_; }
  [[nodiscard]] const std::vector<Vertex>& right() const noexcept { return right_; }
  [[nodiscard]] std::size_t left_size() const noexcept { return left_.size(); }
  [[nodiscard]] std::size_t right_size() const noexcept { return right_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return left_adj_.size(); }

  [[nodiscard]] std::span<const std::int32_t> left_neighbors(std::size_t i) const noexcept {
    return {left_adj_.data() + left_off_[i], left_adj_.data() + left_off_[i + 1]};
  }
  [[nodiscard]] std::span<const std::int32_t> right_neighbors(std::size_t j) const noexcept {
    return {right_adj_.data() + right_off_[j], right_adj_.data() + right_off_[j + 1]};
  }
  [[nodiscard]] std::size_t left_degree(std::size_t i) const noexcept {
    return left_off_[i + 1] - left_off_[i];
  }
  [[nodiscard]] std::size_t right_degree(std::size_t j) const noexcept {
    return right_off_[j + 1] - right_off_[j];
  }

  /// Cross edges in global ids, canonical order.
  [[nodiscard]] std::vector<Edge> cross_edges() const;

  /// Restriction to the given local index subsets (kept in the given order).
  [[nodiscard]] BipartitePair restrict(std::span<const std::size_t> left_idx,
                                       std::span<const std::size_t> right_idx) const;

  friend bool operator==(const BipartitePair&, const BipartitePair&) = default;

 private:
  void index(std::span<const std::pair<std::int32_t, std::int32_t>> local_edges);

  std::vector<Vertex> left_, right_;
  std::vector<std::size_t> left_off_{0}, right_off_{0};
  std::vector<std::int32_t> left_adj_, right_adj_;
};

// Edge-list text format: first line "n m", then m lines "u v" with u < v.
void write_edge_list(std::ostream& out, const Graph& g);
/// Rejects loops, duplicate edges, out-of-range ids and a wrong edge count.
Graph read_edge_list(std::istream& in);

}  // namespace hampack
