#include "hampack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "hampack/exposure.hpp"
#include "hampack/matching.hpp"
#include "hampack/posa.hpp"

namespace hampack {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::full:
      return "full";
    case Outcome::partial:
      return "partial";
    case Outcome::failed:
      return "failed";
  }
  return "failed";
}

Outcome outcome_from_name(std::string_view name) {
  if (name == "full") return Outcome::full;
  if (name == "partial") return Outcome::partial;
  if (name == "failed") return Outcome::failed;
  throw ParseError("unknown outcome '" + std::string(name) + "'");
}

bool operator==(const PackingReport& a, const PackingReport& b) {
  return a.schema_version == b.schema_version && a.n == b.n && a.p == b.p && a.seed == b.seed &&
         a.config == b.config && a.delta == b.delta && a.k_target == b.k_target &&
         a.outcome == b.outcome && a.cycles == b.cycles && a.split.p1 == b.split.p1 &&
         a.split.p2 == b.split.p2 && a.split.p3 == b.split.p3 && a.split.p4 == b.split.p4 &&
         a.split.s_size == b.split.s_size && a.shortfalls == b.shortfalls &&
         a.path_counts == b.path_counts && a.cycles_closed == b.cycles_closed &&
         a.layers_spent == b.layers_spent && a.booster_counts == b.booster_counts &&
         a.timing_ms == b.timing_ms;
}

VerificationResult verify_packing(const Graph& g, const std::vector<std::vector<Vertex>>& cycles) {
  VerificationResult out;
  const Vertex n = g.vertex_count();
  auto fail = [&](std::string msg) {
    out.pass = false;
    out.failures.push_back(std::move(msg));
  };
  std::vector<std::pair<Edge, std::size_t>> used;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& cyc = cycles[c];
    const std::string tag = "cycle " + std::to_string(c);
    if (n < 3 || cyc.size() != static_cast<std::size_t>(n)) {
      fail(tag + " is not Hamiltonian: " + std::to_string(cyc.size()) + " vertices, expected " +
           std::to_string(n));
      continue;
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    bool ok = true;
    for (Vertex v : cyc) {
      if (v < 0 || v >= n) {
        fail(tag + " has out-of-range vertex " + std::to_string(v));
        ok = false;
        break;
      }
      if (seen[v]) {
        fail(tag + " is not Hamiltonian: repeats vertex " + std::to_string(v));
        ok = false;
        break;
      }
      seen[v] = 1;
    }
    if (!ok) continue;
    for (std::size_t t = 0; t < cyc.size(); ++t) {
      const Vertex a = cyc[t], b = cyc[(t + 1) % cyc.size()];
      if (!g.has_edge(a, b)) {
        fail(tag + " uses non-edge {" + std::to_string(std::min(a, b)) + "," +
             std::to_string(std::max(a, b)) + "}");
        continue;
      }
      used.emplace_back(Edge(a, b), c);
    }
  }
  std::sort(used.begin(), used.end());
  for (std::size_t t = 1; t < used.size(); ++t) {
    if (used[t].first == used[t - 1].first) {
      const Edge& e = used[t].first;
      fail("overlap edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} in cycles " +
           std::to_string(used[t - 1].second) + " and " + std::to_string(used[t].second));
    }
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;


void shortfall(PackingReport& r, std::string stage, int level, int pair, std::string detail,
               std::int64_t k_target = 0, std::int64_t k_got = 0) {
  r.shortfalls.push_back({std::move(stage), level, pair, std::move(detail), k_target, k_got});
}

// The pipeline after exposure. `probs` holds p1, p2 and the split flag.
void run_stages(PackingResult& out, Graph g1_star, Graph g2_star, SplitProbabilities probs,
                const PackingConfig& cfg) {
  PackingReport& r = out.report;
  const Vertex n = g1_star.vertex_count();
  const Seed seed = cfg.seed;
  Graph g = graph_union(g1_star, g2_star);
  r.delta = static_cast<std::int64_t>(g.min_degree());
  r.k_target = r.delta / 2;
  probs = with_budget(probs, n, r.k_target);
  r.split.p1 = probs.p1;
  r.split.p2 = probs.p2;
  r.split.p3 = probs.p3;
  r.split.p4 = probs.p4;
  out.graph = g;
  if (n < 2) return;
  ExposureOutcome ex = build_g1_and_s(std::move(g1_star), std::move(g2_star), r.p, cfg.alpha);
  r.split.s_size = ex.s_set.size();
  out.g1 = ex.g1;
  out.s_set = ex.s_set;
  if (r.k_target == 0) return;

  const auto k = static_cast<std::size_t>(r.k_target);
  if (ex.g1.min_degree() != g.min_degree()) shortfall(r, "split", 0, 0, "s_misses_min_degree");

  const double p_g1 = probs.p1 > 0.0 ? probs.p1 : r.p;
  BisectionSchedule sch = bisection_schedule(n, p_g1, cfg.c, derive_seed(seed, "schedule"));
  InnerMatchings inner = build_inner_matchings(ex.g1, sch, k, derive_seed(seed, "inner"), cfg.k_clamping);
  r.shortfalls.insert(r.shortfalls.end(), inner.shortfalls.begin(), inner.shortfalls.end());
  inner.matchings.resize(k);

  const auto& a1 = sch.level(1).parts[1];
  const auto& a2 = sch.level(1).parts[2];
  PairFactor top = regular_for_pair(ex.g1, a1, a2, r.k_target, p_g1, 0.75 * cfg.c,
                                    derive_seed(seed, "top"), 1, 1, cfg.k_clamping);
  r.shortfalls.insert(r.shortfalls.end(), top.shortfalls.begin(), top.shortfalls.end());
  std::vector<Matching> cross;
  if (top.factor) cross = random_ordered_decomposition(*top.factor, derive_seed(seed, "cross"));
  cross.resize(k);

  std::vector<PathSystem> systems;
  for (std::size_t i = 0; i < k; ++i) {
    auto ext = extend_to_perfect(cross[i], a1, a2, derive_seed(seed, "extend", i));
    auto built = assemble_path_system(inner.matchings[i], ext, n, derive_seed(seed, "assemble", i));
    r.path_counts.push_back(built.stats.path_count);
    r.cycles_closed.push_back(built.stats.cycles_closed);
    systems.push_back(std::move(built.paths));
  }

  // Merging: slot i works in G1 minus earlier cycles and later path systems.
  const LayeredG2 layered(ex.g2, probs, derive_seed(seed, "layers"));
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (Vertex v : ex.s_set) in_s[v] = 1;
  ExpanderParams params;
  params.m = cfg.m_override ? *cfg.m_override : std::max<std::int64_t>(1, n / 8);
  params.c = cfg.expander_c;
  MergeOptions mopt;
  mopt.posa.max_fixed_ends = static_cast<std::size_t>(cfg.max_fixed_ends);

  std::vector<Edge> used_cycles;
  for (std::size_t i = 0; i < k; ++i) {
    const auto slot = static_cast<std::int64_t>(i + 1);
    std::vector<Edge> gamma = used_cycles;
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto pe = path_edges(systems[j]);
      gamma.insert(gamma.end(), pe.begin(), pe.end());
    }
    MergeState state;
    state.paths = systems[i];
    state.forbidden = Graph::from_edges(n, gamma);
    state.min_degree = r.delta;
    state.in_s = in_s;
    state.slot = slot;
    Graph base = graph_minus(ex.g1, state.forbidden);

    const std::int64_t rounds = layered.layers() + cfg.retry_budget;
    std::size_t boosters = 0, spent = 0;
    bool stale = false;
    std::optional<std::vector<Vertex>> cycle;
    for (std::int64_t t = 1; t <= rounds && !cycle; ++t) {
      state.step = t;
      ++spent;
      const auto layer = layered.layer(slot, t);
      if (stale && t <= layered.layers()) {
        // After a miss only new usable edges can change the search.
        bool fresh = false;
        for (const Edge& e : layer) {
          if (!in_s[e.u] && !in_s[e.v] && !base.has_edge(e.u, e.v) &&
              !state.forbidden.has_edge(e.u, e.v)) {
            fresh = true;
            break;
          }
        }
        if (!fresh) continue;
      }
      mopt.posa.seed = derive_seed(seed, "posa", static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(t));
      mopt.normalize.seed = derive_seed(seed, "normalize", static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(t));
      MergeResult res = merge_round(state, base, layer, params, mopt);
      boosters += res.boosters;
      if (!res.layer_used.empty()) base = graph_union(base, Graph::from_edges(n, res.layer_used));
      if (res.small_span) shortfall(r, "merge", 0, static_cast<int>(slot), "small_hamiltonian_span",
                                    params.m, static_cast<std::int64_t>(res.small_span));
      stale = res.status == MergeStatus::Retry;
      if (res.status == MergeStatus::Cycle) cycle = std::move(res.cycle);
    }
    r.layers_spent.push_back(spent);
    r.booster_counts.push_back(boosters);
    if (!cycle) {
      shortfall(r, "merge", 0, static_cast<int>(slot), "layer_budget_exhausted");
      continue;
    }
    for (std::size_t t = 0; t < cycle->size(); ++t)
      used_cycles.emplace_back((*cycle)[t], (*cycle)[(t + 1) % cycle->size()]);
    r.cycles.push_back(std::move(*cycle));
  }
}

PackingReport finish(PackingReport r, const Graph& g, Clock::time_point start, bool timing) {
  const auto verdict = verify_packing(g, r.cycles);
  if (!verdict.pass) {
    for (const auto& f : verdict.failures) shortfall(r, "verify", 0, 0, f);
    r.outcome = Outcome::failed;
  } else if (static_cast<std::int64_t>(r.cycles.size()) == r.k_target) {
    r.outcome = Outcome::full;
  } else {
    r.outcome = r.cycles.empty() ? Outcome::failed : Outcome::partial;
  }
  if (timing)
    r.timing_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

PackingReport start_report(Vertex n, double p, const PackingConfig& cfg) {
  PackingReport r;
  r.n = n;
  r.p = p;
  r.seed = cfg.seed;
  r.config = cfg;
  return r;
}

// Split probabilities for the exposure, with the single-round fallback.
std::optional<SplitProbabilities> choose_split(PackingReport& r, Vertex n, double p,
                                               const PackingConfig& cfg) {
  try {
    return split_probabilities(std::max<Vertex>(n, 2), p, cfg.beta, cfg.lambda, 1);
  } catch (const ConfigError& e) {
    if (!cfg.single_round_fallback) {
      shortfall(r, "split", 0, 0, e.what());
      return std::nullopt;
    }
    shortfall(r, "split", 0, 0, "single_round_fallback");
    return fallback_split(std::max<Vertex>(n, 2), p, cfg.beta, cfg.lambda, 1);
  }
}

}  // namespace

PackingResult pack_with_graph(Vertex n, double p, const PackingConfig& config) {
  const auto start = Clock::now();
  if (n < 1) throw InvalidArgument("pack: n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("pack: p must lie in [0,1]");
  PackingResult out;
  out.report = start_report(n, p, config);
  out.graph = Graph(n);
  try {
    validate_config(config);
    auto probs = choose_split(out.report, n, p, config);
    if (!probs) {
      out.report.outcome = Outcome::failed;
      return out;
    }
    auto [g1s, g2s] = expose_two_round(n, *probs, derive_seed(config.seed, "exposure"));
    run_stages(out, std::move(g1s), std::move(g2s), *probs, config);
  } catch (const Error& e) {
    shortfall(out.report, "pipeline", 0, 0, e.what());
    out.report.outcome = Outcome::failed;
    if (config.record_timing)
      out.report.timing_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
  }
  out.report = finish(std::move(out.report), out.graph, start, config.record_timing);
  return out;
}

PackingReport pack(Vertex n, double p, const PackingConfig& config) {
  return pack_with_graph(n, p, config).report;
}

PackingReport pack_graph(const Graph& g, double p, const PackingConfig& config) {
  const auto start = Clock::now();
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("pack_graph: p must lie in [0,1]");
  const Vertex n = g.vertex_count();
  PackingResult out;
  out.report = start_report(n, p, config);
  PackingReport& r = out.report;
  try {
    validate_config(config);
    auto probs = choose_split(r, n, p, config);
    if (!probs) {
      r.outcome = Outcome::failed;
      return r;
    }
    auto [g1s, g2s] = expose_given_graph(g, *probs, derive_seed(config.seed, "exposure"));
    run_stages(out, std::move(g1s), std::move(g2s), *probs, config);
  } catch (const Error& e) {
    shortfall(r, "pipeline", 0, 0, e.what());
    r.outcome = Outcome::failed;
    return r;
  }
  return finish(std::move(r), g, start, config.record_timing);
}

}  // namespace hampack
