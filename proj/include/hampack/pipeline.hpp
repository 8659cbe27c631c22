#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/regular.hpp"
#include "hampack/rng.hpp"

namespace hampack {

struct PackingConfig {
  double alpha = 0.5;
  double beta = 0.25;
  double lambda = 0.1;
  double c = 1.0 / 3.0;
  /// Theoretical expander constant (alpha/16) e^(-16/alpha - 1); recorded, not used.
  double eta = 0.0;
  std::string epsilon = "desk";
  std::optional<std::int64_t> m_override;
  double expander_c = 2.0;
  std::int64_t retry_budget = 16;
  std::int64_t max_fixed_ends = 16;
  bool k_clamping = true;
  bool single_round_fallback = true;
  bool record_timing = true;
  Seed seed = 1;

  friend bool operator==(const PackingConfig&, const PackingConfig&) = default;
};

/// Default configuration with eta filled in from alpha.
PackingConfig default_config();

/// Throws ConfigError when a constant is outside its range.
void validate_config(const PackingConfig& cfg);

/// Flat "key = value" text; '#' starts a comment. Unknown keys and bad values
/// throw ConfigError. Keys not present keep their defaults.
PackingConfig parse_config(std::string_view text);
/// As parse_config without the final validate_config.
PackingConfig parse_config_unchecked(std::string_view text);
std::string config_to_text(const PackingConfig& cfg);

enum class Outcome { full, partial, failed };
std::string_view outcome_name(Outcome o);
Outcome outcome_from_name(std::string_view name);

struct PackingReport {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::int64_t n = 0;
  double p = 0.0;
  Seed seed = 0;
  PackingConfig config;
  std::int64_t delta = 0;
  std::int64_t k_target = 0;
  Outcome outcome = Outcome::full;
  std::vector<std::vector<Vertex>> cycles;

  struct {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
    std::size_t s_size = 0;
  } split;
  std::vector<Shortfall> shortfalls;
  std::vector<std::size_t> path_counts;
  std::vector<std::size_t> cycles_closed;
  std::vector<std::size_t> layers_spent;
  std::vector<std::size_t> booster_counts;
  double timing_ms = 0.0;

  friend bool operator==(const PackingReport& a, const PackingReport& b);
};

struct VerificationResult {
  bool pass = true;
  std::vector<std::string> failures;
};

/// Every cycle must be a Hamilton cycle of g and no edge may appear twice.
VerificationResult verify_packing(const Graph& g, const std::vector<std::vector<Vertex>>& cycles);

struct PackingResult {
  PackingReport report;
  Graph graph;  ///< the G the report refers to
  Graph g1;     ///< first-round graph with the S edges added back
  std::vector<Vertex> s_set;
};

/// Samples G ~ G(n,p) by two-round exposure and packs it. Total on n >= 1 and
/// p in [0,1]; configuration problems end in outcome "failed".
PackingResult pack_with_graph(Vertex n, double p, const PackingConfig& config);
PackingReport pack(Vertex n, double p, const PackingConfig& config);

/// Packs a given graph; its edges are split into the two rounds at density p.
PackingReport pack_graph(const Graph& g, double p, const PackingConfig& config);

}  // namespace hampack
