#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/pipeline.hpp"

namespace hampack {

struct DensityStat {
  double max_ratio = 0.0;  ///< max e(A) / (|A| sqrt(np log n)) over the sets checked
  bool exceeded = false;   ///< max_ratio > gamma
  std::size_t cap = 0;     ///< largest |A| considered
  std::size_t sets_checked = 0;
  std::size_t worst_size = 0;
  bool regime_ok = false;  ///< p >= log n / n
};

/// Random vertex sets of size at most 2 gamma e^(-2/gamma-1) sqrt(n log n / p),
/// plus adversarial ones: suffixes of a min-degree peeling order and greedy
/// dense growth from random roots.
DensityStat check_sparse_density(const Graph& g, double p, double gamma, std::size_t samples,
                                 Seed seed);

/// True if two distinct vertices of s are joined by a path of at most
/// max_len edges in g.
bool has_short_path_between(const Graph& g, std::span<const Vertex> s, int max_len = 4);

/// Lower and upper ends of the typical minimum degree window at (n, p):
/// np - 2 sqrt(np log n) and np - sqrt(np log n) / 2.
std::pair<double, double> min_degree_window(std::int64_t n, double p);

struct GridPoint {
  std::int64_t n = 0;
  double p = 0.0;
  std::string label;  ///< as written in the grid spec

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// "2000:2logn,1000:0.01". A probability may be a number or "<c>logn",
/// meaning c log(n) / n ("logn" alone is c = 1). Throws ParseError.
std::vector<GridPoint> parse_grid(std::string_view spec);

struct TrialRecord {
  std::int64_t n = 0;
  double p = 0.0;
  Seed seed = 0;
  std::int64_t delta = 0;
  bool delta_in_window = false;
  std::size_t s_size = 0;
  bool s_small = false;        ///< |S| <= n^0.1
  bool s_separated = false;    ///< no G1 path of length <= 4 between S vertices
  bool s_has_min_degree = false;  ///< every minimum-degree vertex of G lies in S
  std::size_t cycles_closed_max = 0;
  bool cycles_closed_ok = false;  ///< every slot has cycles_closed <= 5 sqrt(n)
  std::int64_t k_target = 0;
  std::size_t cycles = 0;
  Outcome outcome = Outcome::failed;
  double timing_ms = 0.0;
};

struct GridAggregate {
  GridPoint point;
  std::size_t trials = 0;
  double window_lo = 0.0, window_hi = 0.0;
  double rate_delta_in_window = 0.0;
  double rate_s_small = 0.0;
  double rate_s_separated = 0.0;
  double rate_s_has_min_degree = 0.0;
  double rate_cycles_closed_ok = 0.0;
  double rate_full = 0.0;
  double rate_partial_at_least_k_minus_1 = 0.0;  ///< full counts here too
  double rate_failed = 0.0;
  double mean_timing_ms = 0.0;
  double max_timing_ms = 0.0;
  std::vector<TrialRecord> records;
};

struct ExperimentReport {
  Seed seed = 0;
  std::size_t trials = 0;
  PackingConfig config;
  std::vector<GridAggregate> points;
};

struct ExperimentOptions {
  std::size_t threads = 0;   ///< 0 = hardware concurrency
  bool keep_records = true;
};

/// Packs trials instances per grid point. Trial t at point j uses seed
/// derive_seed(config.seed, "trial", j, t). The result does not depend on
/// the thread count; timing fields are zero when config.record_timing is off.
ExperimentReport run_experiment(const std::vector<GridPoint>& grid, std::size_t trials,
                                const PackingConfig& config, const ExperimentOptions& opts = {});

std::string experiment_to_json(const ExperimentReport& r);

}  // namespace hampack
