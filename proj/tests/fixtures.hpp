#pragma once

// Instance generators shared by the tests.

#include <numeric>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/rng.hpp"

namespace fixture {

using hampack::BipartitePair;
using hampack::Edge;
using hampack::Graph;
using hampack::Vertex;

/// k-regular bipartite pair on left 0..n-1, right n..2n-1: a circulant with
/// both sides relabelled at random and then mixed by degree-preserving
/// switches.
inline BipartitePair random_regular_pair(Vertex n, Vertex k, hampack::Seed seed) {
  hampack::Rng rng(seed);
  std::vector<Vertex> pl(static_cast<std::size_t>(n)), pr(static_cast<std::size_t>(n));
  std::iota(pl.begin(), pl.end(), 0);
  std::iota(pr.begin(), pr.end(), 0);
  rng.shuffle(std::span<Vertex>(pl));
  rng.shuffle(std::span<Vertex>(pr));
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (Vertex i = 0; i < n; ++i)
    for (Vertex s = 0; s < k; ++s) adj[pl[i]][pr[(i + s) % n]] = 1;
  // Switch a-b, c-d into a-d, c-b when both are absent.
  for (int t = 0; t < 20 * n * std::max<Vertex>(k, 1); ++t) {
    const auto a = rng.below(n), c = rng.below(n), b = rng.below(n), d = rng.below(n);
    if (a == c || b == d) continue;
    if (adj[a][b] && adj[c][d] && !adj[a][d] && !adj[c][b]) {
      adj[a][b] = adj[c][d] = 0;
      adj[a][d] = adj[c][b] = 1;
    }
  }
  std::vector<Vertex> left(static_cast<std::size_t>(n)), right(static_cast<std::size_t>(n));
  std::iota(left.begin(), left.end(), 0);
  std::iota(right.begin(), right.end(), n);
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j)
      if (adj[i][j]) e.emplace_back(i, n + j);
  return BipartitePair(left, right, e);
}

/// Cycle 0-1-...-(n-1)-0.
inline Graph cycle_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, e);
}

inline Graph path_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return Graph::from_edges(n, e);
}

/// 6-cycle as a bipartite pair: left {0,2,4}, right {1,3,5}.
inline BipartitePair hexagon_pair() {
  const Graph c6 = cycle_graph(6);
  const auto edges = c6.edges();
  return BipartitePair({0, 2, 4}, {1, 3, 5}, edges);
}

inline BipartitePair complete_pair(Vertex n) {
  std::vector<Vertex> left(static_cast<std::size_t>(n)), right(static_cast<std::size_t>(n));
  std::iota(left.begin(), left.end(), 0);
  std::iota(right.begin(), right.end(), n);
  std::vector<Edge> e;
  for (Vertex a : left)
    for (Vertex b : right) e.emplace_back(a, b);
  return BipartitePair(left, right, e);
}

}  // namespace fixture
