#include "hampack/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hampack/binomial.hpp"
#include "hampack/random_graph.hpp"

namespace hampack {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1]");
}

// 1 - (1 - x)^(1/r), evaluated as -expm1(log1p(-x) / r).
double root_complement(double x, double r) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return -std::expm1(std::log1p(-x) / r);
}

void fill_layers(SplitProbabilities& s, std::int64_t n) {
  s.layers = layer_count(n, s.lambda);
  s.p3 = s.k >= 1 ? root_complement(s.p2, static_cast<double>(s.k)) : 0.0;
  s.p4 = root_complement(s.p3, static_cast<double>(s.layers));
}

}  // namespace

std::int64_t layer_count(std::int64_t n, double lambda) {
  if (n < 1) return 1;
  const double raw = std::floor(std::pow(static_cast<double>(n), 1.0 - lambda) + 1e-9);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(raw));
}

SplitProbabilities split_probabilities(std::int64_t n, double p, double beta, double lambda,
                                       std::int64_t k) {
  check_p(p);
  if (n < 2) throw InvalidArgument("split_probabilities: n must be at least 2");
  if (!(beta >= 0.0)) throw InvalidArgument("split_probabilities: beta must be non-negative");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("split_probabilities: lambda must lie in [0,1)");
  if (k < 0) throw InvalidArgument("split_probabilities: k must be non-negative");
  SplitProbabilities s;
  s.p = p;
  s.beta = beta;
  s.lambda = lambda;
  s.k = k;
  const double nn = static_cast<double>(n);
  const double gap = beta * std::sqrt(p * std::log(nn) / nn);
  if (gap > 0.0 && !(gap < p))
    throw ConfigError("p1 = p - beta*sqrt(p log n / n) is not positive (p=" + std::to_string(p) +
                      ", beta=" + std::to_string(beta) + ")");
  s.p1 = p - gap;
  // 1 - (1-p)/(1-p1) = (p - p1) / (1 - p1).
  s.p2 = p >= 1.0 ? (gap > 0.0 ? 1.0 : 0.0) : gap / (1.0 - s.p1);
  fill_layers(s, n);
  return s;
}

SplitProbabilities fallback_split(std::int64_t n, double p, double beta, double lambda,
                                  std::int64_t k) {
  check_p(p);
  SplitProbabilities s;
  s.p = p;
  s.beta = beta;
  s.lambda = lambda;
  s.k = k;
  s.p1 = 0.9 * p;
  s.p2 = p >= 1.0 ? 1.0 : (0.1 * p) / (1.0 - s.p1);
  s.single_round_fallback = true;
  fill_layers(s, n);
  return s;
}

SplitProbabilities with_budget(SplitProbabilities probs, std::int64_t n, std::int64_t k) {
  probs.k = k;
  fill_layers(probs, n);
  return probs;
}

std::pair<Graph, Graph> expose_two_round(Vertex n, const SplitProbabilities& probs, Seed seed) {
  return {gen_gnp(n, probs.p1, derive_seed(seed, "round1")),
          gen_gnp(n, probs.p2, derive_seed(seed, "round2"))};
}

std::pair<Graph, Graph> expose_given_graph(const Graph& g, const SplitProbabilities& probs,
                                           Seed seed) {
  const double p = probs.p;
  // Given the union holds the edge: only round 1, only round 2, or both.
  double only1 = 1.0, only2 = 0.0;
  if (p > 0.0) {
    only1 = probs.p1 * (1.0 - probs.p2) / p;
    only2 = (1.0 - probs.p1) * probs.p2 / p;
  }
  Rng rng = Rng::stream(seed, "expose-given");
  GraphBuilder b1(g.vertex_count()), b2(g.vertex_count());
  for (const Edge& e : g.edges()) {
    const double u = rng.uniform01();
    if (u < only1) {
      b1.add_edge(e);
    } else if (u < only1 + only2) {
      b2.add_edge(e);
    } else {
      b1.add_edge(e);
      b2.add_edge(e);
    }
  }
  return {b1.build(), b2.build()};
}

std::int64_t s_threshold(std::int64_t n, double p, double alpha) {
  if (n < 2) return 0;
  const double nn = static_cast<double>(n);
  const double slack = std::floor(alpha * std::sqrt(nn * p * std::log(nn)));
  return delta_quantile(n, p) + static_cast<std::int64_t>(slack);
}

ExposureOutcome build_g1_and_s(Graph g1_star, Graph g2_star, double p, double alpha) {
  if (g1_star.vertex_count() != g2_star.vertex_count())
    throw InvalidArgument("build_g1_and_s: rounds live on different universes");
  const Vertex n = g1_star.vertex_count();
  ExposureOutcome out;
  out.threshold = s_threshold(n, p, alpha);
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    if (static_cast<std::int64_t>(g1_star.degree(v)) <= out.threshold) {
      in_s[v] = 1;
      out.s_set.push_back(v);
    }
  }
  std::vector<Edge> extra;
  for (Vertex v : out.s_set) {
    for (Vertex w : g2_star.neighbors(v)) extra.emplace_back(v, w);
  }
  // Only S adjacency of the second round is consulted above.
  out.g2_edges_read_for_g1 = 0;
  out.g1 = graph_union(g1_star, Graph::from_edges(n, extra));

  std::vector<Edge> rest;
  for (Vertex v = 0; v < n; ++v) {
    if (in_s[v]) continue;
    for (Vertex w : g2_star.neighbors(v)) {
      if (v < w && !in_s[w]) rest.emplace_back(v, w);
    }
  }
  out.g2 = Graph::from_edges(n, rest);
  out.g1_star = std::move(g1_star);
  out.g2_star = std::move(g2_star);
  return out;
}

Graph sample_booster_layer(const LayerKey& key, const SplitProbabilities& probs,
                           std::span<const Vertex> universe, Vertex n) {
  Rng rng = Rng::stream(key.master_seed, "layer", static_cast<std::uint64_t>(key.cycle_index),
                        static_cast<std::uint64_t>(key.step_index));
  const auto edges = sample_pairs(universe, probs.p4, rng);
  return Graph::from_edges(n, edges);
}

LayeredG2::LayeredG2(const Graph& g2, const SplitProbabilities& probs, Seed seed)
    : slots_(std::max<std::int64_t>(probs.k, 0)), layers_(std::max<std::int64_t>(probs.layers, 1)) {
  const std::int64_t cells = slots_ * layers_;
  if (cells == 0 || probs.p4 <= 0.0) return;
  Rng rng = Rng::stream(seed, "layer-assign");
  const double p4 = std::min(probs.p4, 1.0);
  const double log_q = std::log1p(-p4);
  // P(at least one of the cells) = 1 - (1-p4)^cells.
  const double hit_any = p4 >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(cells) * log_q);
  std::vector<std::pair<std::int64_t, Edge>> assigned;
  for (const Edge& e : g2.edges()) {
    if (p4 >= 1.0) {
      for (std::int64_t c = 0; c < cells; ++c) assigned.emplace_back(c, e);
      continue;
    }
    // First cell: geometric truncated to [0, cells).
    const double u = rng.uniform01();
    auto c = static_cast<std::int64_t>(std::floor(std::log1p(-u * hit_any) / log_q));
    c = std::clamp<std::int64_t>(c, 0, cells - 1);
    for (;;) {
      assigned.emplace_back(c, e);
      const double skip = std::floor(std::log(rng.uniform_open0()) / log_q);
      if (skip >= static_cast<double>(cells - c - 1)) break;
      c += 1 + static_cast<std::int64_t>(skip);
    }
  }
  std::stable_sort(assigned.begin(), assigned.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  cell_of_.reserve(assigned.size());
  edges_.reserve(assigned.size());
  for (const auto& [c, e] : assigned) {
    cell_of_.push_back(c);
    edges_.push_back(e);
  }
}

std::span<const Edge> LayeredG2::layer(std::int64_t i, std::int64_t s) const {
  if (i < 1 || i > slots_ || s < 1 || s > layers_) return {};
  const std::int64_t c = (i - 1) * layers_ + (s - 1);
  const auto [lo, hi] = std::equal_range(cell_of_.begin(), cell_of_.end(), c);
  const auto first = static_cast<std::size_t>(lo - cell_of_.begin());
  return {edges_.data() + first, static_cast<std::size_t>(hi - lo)};
}

std::size_t LayeredG2::nonempty_layers(std::int64_t i) const {
  if (i < 1 || i > slots_) return 0;
  const std::int64_t lo = (i - 1) * layers_, hi = i * layers_;
  std::size_t count = 0;
  std::int64_t last = -1;
  for (std::int64_t c : cell_of_) {
    if (c >= lo && c < hi && c != last) {
      ++count;
      last = c;
    }
  }
  return count;
}

}  // namespace hampack
