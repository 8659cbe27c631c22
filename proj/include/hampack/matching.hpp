#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/regular.hpp"
#include "hampack/rng.hpp"

namespace hampack {

struct Matching {
  std::vector<Edge> edges;  ///< canonical order

  [[nodiscard]] std::size_t size() const noexcept { return edges.size(); }
  friend bool operator==(const Matching&, const Matching&) = default;
};

/// True iff no two edges share a vertex.
bool is_matching(std::span<const Edge> edges);

/// Maximum matching of a bipartite adjacency list (left i -> right locals).
/// Returns mate[i] = matched right local or -1.
std::vector<std::int32_t> hopcroft_karp(const std::vector<std::vector<std::int32_t>>& adj,
                                        std::size_t right_size);

/// Splits an exactly k-regular bipartite graph into k perfect matchings by
/// repeated perfect-matching removal. Adjacency order is shuffled with `seed`.
/// Throws InvalidArgument if h is not k-regular.
std::vector<Matching> decompose_regular(const RegularSubgraph& h, Seed seed = 0);

/// decompose_regular with randomized search order followed by a uniform
/// permutation of the resulting list.
std::vector<Matching> random_ordered_decomposition(const RegularSubgraph& h, Seed seed);

struct InnerMatchings {
  std::vector<Matching> matchings;  ///< sorted by size, descending
  std::vector<Shortfall> shortfalls;
};

/// Pools the decompositions of levels 2..ell; the s-th matching of a level is
/// the union of the s-th matchings of its pairs. Truncated to k.
InnerMatchings build_inner_matchings(const Graph& g, const BisectionSchedule& schedule,
                                     std::size_t k, Seed seed, bool allow_reduced = true);

struct PerfectExtension {
  Matching base;
  std::vector<Edge> synthetic_edges;
  Matching total;
};

/// Matches the A and B vertices left uncovered by `base` with a uniform random
/// bijection. Throws InvalidArgument when the uncovered counts differ or base
/// is not an A-B matching.
PerfectExtension extend_to_perfect(const Matching& base, std::span<const Vertex> a,
                                   std::span<const Vertex> b, Seed seed);

/// Vertex-disjoint paths (vertex sequences) covering 0..n-1; a lone vertex is
/// a trivial path.
struct PathSystem {
  Vertex n = 0;
  std::vector<std::vector<Vertex>> paths;

  [[nodiscard]] std::size_t size() const noexcept { return paths.size(); }
  friend bool operator==(const PathSystem&, const PathSystem&) = default;
};

/// Throws InvalidArgument unless the paths are disjoint, cover 0..n-1 and use
/// only edges of g (when g is given).
void validate_path_system(const PathSystem& ps, const Graph* g = nullptr);

/// Edges of all paths.
std::vector<Edge> path_edges(const PathSystem& ps);

struct ComponentStats {
  std::size_t path_count = 0;
  std::size_t cycles_closed = 0;  ///< cycles of M u N'
  std::size_t isolated_in_m = 0;  ///< vertices of 0..n-1 not covered by M
  std::size_t dropped_edges = 0;  ///< |N' \ N|

  friend bool operator==(const ComponentStats&, const ComponentStats&) = default;
};

struct AssembledPaths {
  PathSystem paths;
  ComponentStats stats;
};

/// Paths of M u N on 0..n-1 with every cycle broken at a uniformly chosen
/// edge. Throws ContractViolation if M u N' has a vertex of degree above 2.
AssembledPaths assemble_path_system(const Matching& m, const PerfectExtension& ext, Vertex n,
                                    Seed seed);

}  // namespace hampack
