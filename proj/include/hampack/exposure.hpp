#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

struct SplitProbabilities {
  double p = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  std::int64_t k = 0;       ///< cycle budget used for p3
  std::int64_t layers = 0;  ///< layers per cycle slot used for p4
  bool single_round_fallback = false;
};

/// Layers per cycle slot: floor(n^(1 - lambda)), at least 1.
std::int64_t layer_count(std::int64_t n, double lambda);

/// p1 = p - beta sqrt(p log n / n), p2 from (1-p1)(1-p2) = 1-p, then
/// (1-p3)^k = 1-p2 and (1-p4)^layers = 1-p3. Throws ConfigError when p1 <= 0
/// and InvalidArgument on out-of-range inputs.
SplitProbabilities split_probabilities(std::int64_t n, double p, double beta, double lambda,
                                       std::int64_t k);

/// Same identities with p1 = 0.9 p; flagged as a single-round fallback.
SplitProbabilities fallback_split(std::int64_t n, double p, double beta, double lambda,
                                  std::int64_t k);

/// Recomputes p3 and p4 for a new cycle budget k (p1, p2 unchanged).
SplitProbabilities with_budget(SplitProbabilities probs, std::int64_t n, std::int64_t k);

/// Independent G(n, p1) and G(n, p2).
std::pair<Graph, Graph> expose_two_round(Vertex n, const SplitProbabilities& probs, Seed seed);

/// Splits the edges of a given graph into two rounds with the conditional
/// law of (G1*, G2*) given G1* u G2* = g. An edge may land in both.
std::pair<Graph, Graph> expose_given_graph(const Graph& g, const SplitProbabilities& probs,
                                           Seed seed);

struct ExposureOutcome {
  Graph g1_star;
  Graph g2_star;
  Graph g1;
  std::vector<Vertex> s_set;  ///< sorted
  Graph g2;                   ///< g2_star restricted to V \ S (same universe)
  std::int64_t threshold = 0;
  /// Adjacency entries of g2_star read for vertices outside S while building g1.
  std::size_t g2_edges_read_for_g1 = 0;
};

/// S-set threshold delta_{n,p} + floor(alpha sqrt(np log n)).
std::int64_t s_threshold(std::int64_t n, double p, double alpha);

ExposureOutcome build_g1_and_s(Graph g1_star, Graph g2_star, double p, double alpha);

struct LayerKey {
  std::int64_t cycle_index = 1;  ///< 1..k
  std::int64_t step_index = 1;   ///< 1..layers
  Seed master_seed = 0;
};

/// A fresh G(universe, p4) sample keyed by (master, i, s).
Graph sample_booster_layer(const LayerKey& key, const SplitProbabilities& probs,
                           std::span<const Vertex> universe, Vertex n);

/// Exact layering of a fixed G2: every edge of g2 receives a nonempty random
/// set of cells (i, s), each cell independently with probability p4, conditioned
/// on at least one. Marginally the cells are independent G(V \ S, p4) graphs
/// whose union is g2. Only nonempty layers are stored.
class LayeredG2 {
 public:
  LayeredG2() = default;
  LayeredG2(const Graph& g2, const SplitProbabilities& probs, Seed seed);

  [[nodiscard]] std::int64_t slots() const noexcept { return slots_; }
  [[nodiscard]] std::int64_t layers() const noexcept { return layers_; }
  /// Edges of layer (i, s), 1-based; empty span for an empty layer.
  [[nodiscard]] std::span<const Edge> layer(std::int64_t i, std::int64_t s) const;
  /// Number of distinct layers of slot i that hold at least one edge.
  [[nodiscard]] std::size_t nonempty_layers(std::int64_t i) const;
  [[nodiscard]] std::size_t cell_count() const noexcept { return edges_.size(); }

 private:
  std::int64_t slots_ = 0;
  std::int64_t layers_ = 0;
  // Parallel arrays sorted by cell index (i-1)*layers + (s-1).
  std::vector<std::int64_t> cell_of_;
  std::vector<Edge> edges_;
};

}  // namespace hampack
