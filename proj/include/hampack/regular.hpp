#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// Closed degree window [center - halfwidth, center + halfwidth].
struct DegreeWindow {
  double center = 0.0;
  double halfwidth = 0.0;
  double c = 0.0;

  /// Window centred at n p with halfwidth c sqrt(n p log n).
  static DegreeWindow around(std::int64_t n, double p, double c);
  /// [k, infinity).
  static DegreeWindow at_least(std::int64_t k);

  [[nodiscard]] std::int64_t lo() const;
  [[nodiscard]] std::int64_t hi() const;
  [[nodiscard]] bool empty() const { return lo() > hi(); }
  [[nodiscard]] bool contains(std::int64_t d) const { return d >= lo() && d <= hi(); }
};

struct TrimResult {
  BipartitePair h;  ///< induced on the surviving (A0, B0)
  /// Evicted (left, right) pairs, global ids.
  std::vector<std::pair<Vertex, Vertex>> removed_minus;
  std::vector<std::pair<Vertex, Vertex>> removed_plus;
  std::size_t z_cap = 0;
  bool aborted = false;
};

/// Default eviction cap n^(1 - c^2/66) / 2.
std::size_t default_z_cap(std::int64_t n, double c);

/// How the opposite-side partner of an evicted vertex is chosen.
enum class PartnerRule {
  uniform,       ///< uniform over the opposite side's survivors
  prefer_low,    ///< an opposite survivor already below the window, else uniform
};

/// Degree-window trimming. Low-degree vertices are evicted to the minus class
/// first, then high-degree ones to the plus class, each paired with a partner
/// from the opposite side's survivors. Aborts when a class reaches z_cap
/// pairs. Requires |A| = |B|.
TrimResult trim_balanced(const BipartitePair& bp, const DegreeWindow& window, std::size_t z_cap,
                         Seed seed, PartnerRule rule = PartnerRule::uniform);

/// e(X, Y) - k(|X| + |Y| - n) for local index sets X of A and Y of B, n = |A|.
std::int64_t bal_deficiency(const BipartitePair& bp, std::int64_t k,
                            std::span<const std::size_t> x, std::span<const std::size_t> y);

/// A k-regular spanning subgraph of a balanced pair.
struct RegularSubgraph {
  BipartitePair graph;
  std::size_t k = 0;

  [[nodiscard]] std::size_t span() const noexcept { return graph.left_size() + graph.right_size(); }
};

struct KFactorResult {
  std::optional<RegularSubgraph> factor;
  std::int64_t flow = 0;      ///< max flow reached
  std::int64_t required = 0;  ///< k |A|
};

/// Flow-based k-factor extraction. Requires |A| = |B| and 0 <= k <= |A|.
KFactorResult extract_k_factor(const BipartitePair& bp, std::size_t k);

/// True iff every vertex of g has degree exactly k and g is a subgraph of host.
bool is_k_factor_of(const BipartitePair& g, const BipartitePair& host, std::size_t k);

struct BisectionLevel {
  int i = 0;
  /// parts[0] is the leftover part A_0^i; parts[1..2^i] have floor(n / 2^i) vertices.
  std::vector<std::vector<Vertex>> parts;
  std::int64_t k_i = 0;
  std::int64_t m_i = 0;
};

struct BisectionSchedule {
  int ell = 0;
  std::vector<BisectionLevel> levels;  ///< levels[i-1] is level i
  double c = 0.0;
  double p = 0.0;
  double k_total = 0.0;  ///< (np - c sqrt(np log n)) / 2

  [[nodiscard]] const BisectionLevel& level(int i) const { return levels.at(static_cast<std::size_t>(i - 1)); }
};

/// Smallest l >= 1 with p 2^-l n < (c/4) sqrt(np log n), capped at floor(log2 n).
int bisection_depth(std::int64_t n, double p, double c);
std::int64_t level_k(std::int64_t n, double p, double c, int i);
std::int64_t level_m(std::int64_t n, double c, int i);

BisectionSchedule bisection_schedule(Vertex n, double p, double c, Seed seed);

struct Shortfall {
  std::string stage;
  int level = 0;
  int pair = 0;
  std::string detail;
  std::int64_t k_target = 0;
  std::int64_t k_got = 0;

  friend bool operator==(const Shortfall&, const Shortfall&) = default;
};

struct PairFactor {
  std::optional<RegularSubgraph> factor;
  std::vector<Shortfall> shortfalls;
  bool trim_aborted = false;
};

/// Trim the pair (left, right) of g to the window around |left| p with
/// constant c_trim, then extract a k-factor. On an aborted trim the pair is
/// re-trimmed to [k, inf); when k is infeasible the largest feasible k' < k is
/// taken. Shortfalls are recorded against (level, pair).
PairFactor regular_for_pair(const Graph& g, std::span<const Vertex> left,
                            std::span<const Vertex> right, std::int64_t k, double p,
                            double c_trim, Seed seed, int level, int pair,
                            bool allow_reduced = true);

struct LevelRegulars {
  std::vector<RegularSubgraph> factors;  ///< one per pair j that produced a factor
  std::vector<Shortfall> shortfalls;
};

/// Level i regular subgraphs H_j^i on the pairs (A_{2j-1}^i, A_{2j}^i).
LevelRegulars build_level_regulars(const Graph& g, const BisectionSchedule& schedule, int i,
                                   Seed seed, bool allow_reduced = true);

}  // namespace hampack
