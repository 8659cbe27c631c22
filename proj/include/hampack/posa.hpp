#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/matching.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// (m, c)-expander: every U with |U| <= m has |N(U)| >= c |U|.
struct ExpanderParams {
  std::int64_t m = 1;
  double c = 2.0;
};

enum class ExpanderMode { exact, sampled };

struct ExpanderVerdict {
  bool holds = true;
  bool exhaustive = false;      ///< true only for exact mode
  std::vector<Vertex> witness;  ///< a violating U when !holds
  std::size_t sets_checked = 0;
};

/// Exact mode enumerates every U with |U| <= m (n <= 24, otherwise
/// InvalidArgument). Sampled mode tries `samples` random sets, half uniform and
/// half grown along edges; "holds" then only means no counterexample was found.
ExpanderVerdict check_expander(const Graph& g, const ExpanderParams& params, ExpanderMode mode,
                               std::size_t samples = 100000, Seed seed = 0);

/// Exact Hamilton cycle search (Held-Karp dynamic programme) for n <= 14.
std::optional<std::vector<Vertex>> hamilton_oracle_small(const Graph& g);

/// True iff `cycle` visits every vertex of g exactly once and consecutive
/// vertices (cyclically) are adjacent in g. Needs at least 3 vertices.
bool is_hamilton_cycle(const Graph& g, std::span<const Vertex> cycle);

enum class TrichotomyKind { ExtendablePath, HamiltonianSpan, BoosterSet };

struct TrichotomyOutcome {
  TrichotomyKind kind = TrichotomyKind::BoosterSet;
  /// ExtendablePath: a Hamilton path of g[V(P)] whose last vertex is adjacent
  /// to `outside`.
  std::vector<Vertex> path;
  Vertex outside = -1;
  /// HamiltonianSpan: a cycle on V(P) (closing edge back().front()).
  std::vector<Vertex> cycle;
  /// BoosterSet: non-edges {f, x} such that f..x is a rotated Hamilton path.
  std::vector<Edge> boosters;
  /// A probe pair reached as a booster, with its Hamilton path f..x.
  std::optional<Edge> probe_hit;
  std::vector<Vertex> probe_path;
  std::size_t discoveries = 0;
  bool budget_exhausted = false;
};

struct PosaOptions {
  std::size_t max_fixed_ends = 16;  ///< level-1 ends used as fixed ends at level 2
  std::size_t budget = 0;           ///< endpoint discoveries per fixed end; 0 means 4n
  Seed seed = 0;                    ///< neighbour-order randomization
  /// Outside vertices that count for ExtendablePath; nullptr means all of V \ V(P).
  const std::vector<char>* outside_mask = nullptr;
  /// Candidate pairs checked as boosters (sorted); a hit stops the search.
  std::span<const Edge> probes;
  bool collect_boosters = true;
};

/// Rotation closure on g[V(P)] with one end fixed, then with each of up to
/// max_fixed_ends reached ends fixed in turn. Returns ExtendablePath as soon
/// as a rotated end sees an outside vertex, HamiltonianSpan when a closing
/// edge exists, and otherwise the certified booster pairs. Throws
/// InvalidArgument if P is not a path of g.
TrichotomyOutcome posa_trichotomy(const Graph& g, std::span<const Vertex> path,
                                  const PosaOptions& options = {});

/// Replays the deterministic search of posa_trichotomy and returns the Hamilton
/// cycle of g[V(P)] + {pair}; nullopt when the pair is not reached.
std::optional<std::vector<Vertex>> realize_booster(const Graph& g, std::span<const Vertex> path,
                                                   const Edge& pair,
                                                   const PosaOptions& options = {});

struct PathOrderKey {
  std::size_t s = 0;
  std::vector<std::size_t> lengths;  ///< nonincreasing

  static PathOrderKey of(const PathSystem& ps);
};

/// a before b iff fewer paths, or the same count and a lexicographically
/// larger length vector.
std::weak_ordering compare_path_systems(const PathOrderKey& a, const PathOrderKey& b);

struct NormalizeOptions {
  std::size_t rotation_budget = 0;  ///< per exploration; 0 means 4n
  std::size_t max_moves = 0;        ///< splices; 0 means 4n
  Seed seed = 0;
};

struct NormalizeStats {
  std::size_t moves = 0;
  std::size_t explorations = 0;
  bool budget_exhausted = false;
};

/// Splices later paths onto rotated endpoints of earlier ones until no
/// endpoint of a rotated Hamilton path of P_r sees a later path (or the move
/// budget runs out). Paths come back sorted by length, longest first.
PathSystem normalize_extremal(const Graph& g, const PathSystem& ps,
                              const NormalizeOptions& options = {},
                              NormalizeStats* stats = nullptr);

struct MergeState {
  PathSystem paths;
  Graph forbidden;                ///< Gamma
  std::int64_t min_degree = 0;    ///< delta(G), for the Delta(Gamma) contract
  std::vector<char> in_s;         ///< S membership (layer pairs touching S are ignored)
  std::int64_t slot = 1;
  std::int64_t step = 1;
};

struct MergeOptions {
  PosaOptions posa;
  NormalizeOptions normalize;
};

enum class MergeStatus { Advanced, Cycle, Retry };

struct MergeResult {
  MergeStatus status = MergeStatus::Retry;
  std::vector<Vertex> cycle;  ///< Hamilton cycle on V when status == Cycle
  std::size_t boosters = 0;   ///< boosters found in this round
  std::size_t paths_before = 0;
  std::size_t paths_after = 0;
  std::vector<Edge> layer_used;  ///< layer edges left after filtering
  std::size_t small_span = 0;   ///< size of a Hamiltonian span smaller than params.m
  std::string diagnostic;
};

/// One round of the merging loop on base = G'_s with the booster layer.
/// Advanced: the path system improved (usually s-1 paths). Cycle: a verified
/// Hamilton cycle in base u layer avoiding Gamma. Retry: nothing usable in
/// this layer. Throws ContractViolation if Delta(Gamma) > delta(G) - 2 or a
/// produced cycle fails verification.
MergeResult merge_round(MergeState& state, const Graph& base, std::span<const Edge> layer,
                        const ExpanderParams& params, const MergeOptions& options = {});

}  // namespace hampack
