#include "hampack/random_graph.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace hampack {

namespace {

constexpr double kSkipThreshold = 0.1;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1], got " + std::to_string(p));
}

// Visits the indices of a Bernoulli(p) subset of [0, total) in increasing order.
template <class Visit>
void bernoulli_indices(std::uint64_t total, double p, Rng& rng, Visit visit) {
  if (p <= 0.0 || total == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t i = 0; i < total; ++i) visit(i);
    return;
  }
  if (p >= kSkipThreshold) {
    for (std::uint64_t i = 0; i < total; ++i) {
      if (rng.uniform01() < p) visit(i);
    }
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t i = 0;
  for (;;) {
    const double skip = std::floor(std::log(rng.uniform_open0()) / log_q);
    if (skip >= static_cast<double>(total - i)) return;
    i += static_cast<std::uint64_t>(skip);
    visit(i);
    if (++i >= total) return;
  }
}

}  // namespace

std::vector<Edge> sample_pairs(std::span<const Vertex> vertices, double p, Rng& rng) {
  check_probability(p);
  std::vector<Edge> edges;
  const auto k = static_cast<std::uint64_t>(vertices.size());
  if (k < 2) return edges;
  const std::uint64_t total = k * (k - 1) / 2;
  edges.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.05) + 8);
  // Pair index t enumerates (w, v) with w < v row by row: t = v(v-1)/2 + w.
  std::uint64_t row = 1, row_start = 0;
  bernoulli_indices(total, p, rng, [&](std::uint64_t t) {
    while (t >= row_start + row) {
      row_start += row;
      ++row;
    }
    edges.emplace_back(vertices[t - row_start], vertices[row]);
  });
  return edges;
}

Graph gen_gnp(Vertex n, double p, Seed seed) {
  if (n < 1) throw InvalidArgument("gen_gnp: n must be at least 1");
  check_probability(p);
  std::vector<Vertex> all(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  Rng rng = Rng::stream(seed, "gnp");
  const auto edges = sample_pairs(all, p, rng);
  return Graph::from_edges(n, edges);
}

BipartitePair gen_bipartite_gnnp(Vertex n, double p, Seed seed) {
  if (n < 1) throw InvalidArgument("gen_bipartite_gnnp: n must be at least 1");
  check_probability(p);
  std::vector<Vertex> left(static_cast<std::size_t>(n)), right(static_cast<std::size_t>(n));
  for (Vertex i = 0; i < n; ++i) {
    left[i] = i;
    right[i] = n + i;
  }
  Rng rng = Rng::stream(seed, "gnnp");
  std::vector<Edge> edges;
  const auto side = static_cast<std::uint64_t>(n);
  bernoulli_indices(side * side, p, rng, [&](std::uint64_t t) {
    edges.emplace_back(static_cast<Vertex>(t / side), static_cast<Vertex>(n + t % side));
  });
  return BipartitePair(std::move(left), std::move(right), edges);
}

}  // namespace hampack
