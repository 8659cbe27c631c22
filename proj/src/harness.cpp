#include "hampack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <queue>
#include <thread>

#include "hampack/error.hpp"
#include "json_util.hpp"

namespace hampack {

namespace {

double density_scale(std::int64_t n, double p) {
  return std::sqrt(static_cast<double>(n) * p * std::log(static_cast<double>(n)));
}

// e(A) with `mark` set on A; mark is left as it was found.
std::size_t inside(const Graph& g, std::span<const Vertex> a, std::vector<char>& mark) {
  for (Vertex v : a) mark[v] = 1;
  std::size_t twice = 0;
  for (Vertex v : a)
    for (Vertex w : g.neighbors(v)) twice += mark[w];
  for (Vertex v : a) mark[v] = 0;
  return twice / 2;
}

}  // namespace

DensityStat check_sparse_density(const Graph& g, double p, double gamma, std::size_t samples,
                                 Seed seed) {
  DensityStat st;
  const Vertex n = g.vertex_count();
  if (n < 2 || !(p > 0.0)) return st;
  const double logn = std::log(static_cast<double>(n));
  st.regime_ok = p >= logn / static_cast<double>(n);
  const double cap =
      2.0 * gamma * std::exp(-2.0 / gamma - 1.0) * std::sqrt(static_cast<double>(n) * logn / p);
  st.cap = static_cast<std::size_t>(std::clamp(std::floor(cap), 0.0, static_cast<double>(n)));
  if (st.cap == 0) return st;
  const double scale = density_scale(n, p);
  std::vector<char> mark(static_cast<std::size_t>(n), 0);

  auto record = [&](std::span<const Vertex> a) {
    ++st.sets_checked;
    if (a.empty()) return;
    const double ratio =
        static_cast<double>(inside(g, a, mark)) / (static_cast<double>(a.size()) * scale);
    if (ratio > st.max_ratio) {
      st.max_ratio = ratio;
      st.worst_size = a.size();
    }
  };

  Rng rng(derive_seed(seed, "density"));
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) perm[v] = v;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t size = 1 + rng.below(st.cap);
    for (std::size_t t = 0; t < size; ++t) {
      const std::size_t j = t + rng.below(perm.size() - t);
      std::swap(perm[t], perm[j]);
    }
    record(std::span<const Vertex>(perm.data(), size));
  }

  // Min-degree peeling; the last vertices removed form the densest tail.
  {
    std::vector<std::size_t> deg(static_cast<std::size_t>(n));
    using Item = std::pair<std::size_t, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (Vertex v = 0; v < n; ++v) {
      deg[v] = g.degree(v);
      pq.emplace(deg[v], v);
    }
    std::vector<char> gone(static_cast<std::size_t>(n), 0);
    std::vector<Vertex> order;
    order.reserve(static_cast<std::size_t>(n));
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (gone[v] || d != deg[v]) continue;
      gone[v] = 1;
      order.push_back(v);
      for (Vertex w : g.neighbors(v))
        if (!gone[w]) pq.emplace(--deg[w], w);
    }
    std::reverse(order.begin(), order.end());
    for (std::size_t size = 1; size <= st.cap; ++size)
      record(std::span<const Vertex>(order.data(), size));
  }

  // Greedy growth: add the frontier vertex with most neighbours in A.
  const std::size_t roots = std::min<std::size_t>(static_cast<std::size_t>(n), 64);
  std::vector<std::size_t> attach(static_cast<std::size_t>(n), 0);
  for (std::size_t r = 0; r < roots; ++r) {
    std::vector<Vertex> a{static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)))};
    std::vector<Vertex> frontier;
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    in_a[a[0]] = 1;
    auto absorb = [&](Vertex v) {
      for (Vertex w : g.neighbors(v)) {
        if (in_a[w]) continue;
        if (attach[w]++ == 0) frontier.push_back(w);
      }
    };
    absorb(a[0]);
    record(a);
    while (a.size() < st.cap && !frontier.empty()) {
      auto best = std::max_element(frontier.begin(), frontier.end(),
                                   [&](Vertex x, Vertex y) { return attach[x] < attach[y]; });
      const Vertex v = *best;
      *best = frontier.back();
      frontier.pop_back();
      attach[v] = 0;
      in_a[v] = 1;
      a.push_back(v);
      absorb(v);
      record(a);
    }
    for (Vertex w : frontier) attach[w] = 0;
  }
  st.exceeded = st.max_ratio > gamma;
  return st;
}

bool has_short_path_between(const Graph& g, std::span<const Vertex> s, int max_len) {
  const Vertex n = g.vertex_count();
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (Vertex v : s) in_s[v] = 1;
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> touched, queue;
  for (Vertex src : s) {
    for (Vertex v : touched) dist[v] = -1;
    touched.assign({src});
    queue.assign({src});
    dist[src] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Vertex v = queue[h];
      if (dist[v] == max_len) continue;
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] >= 0) continue;
        if (in_s[w]) return true;
        dist[w] = dist[v] + 1;
        touched.push_back(w);
        queue.push_back(w);
      }
    }
  }
  return false;
}

std::pair<double, double> min_degree_window(std::int64_t n, double p) {
  const double np = static_cast<double>(n) * p;
  const double root = density_scale(n, p);
  return {np - 2.0 * root, np - 0.5 * root};
}

std::vector<GridPoint> parse_grid(std::string_view spec) {
  std::vector<GridPoint> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = std::min(spec.find(',', pos), spec.size());
    const std::string_view item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError("grid item '" + std::string(item) + "': expected n:p");
    GridPoint gp;
    gp.label = std::string(item);
    const std::string_view ns = item.substr(0, colon);
    std::string_view ps = item.substr(colon + 1);
    const auto [np, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), gp.n);
    if (ec != std::errc() || np != ns.data() + ns.size() || gp.n < 1)
      throw ParseError("grid item '" + std::string(item) + "': bad n");
    const bool logn = ps.ends_with("logn");
    if (logn) ps.remove_suffix(4);
    double coef = 1.0;
    if (!ps.empty() || !logn) {
      const auto [pp, pec] = std::from_chars(ps.data(), ps.data() + ps.size(), coef);
      if (pec != std::errc() || pp != ps.data() + ps.size())
        throw ParseError("grid item '" + std::string(item) + "': bad p");
    }
    gp.p = logn ? coef * std::log(static_cast<double>(gp.n)) / static_cast<double>(gp.n) : coef;
    if (!(gp.p >= 0.0 && gp.p <= 1.0))
      throw ParseError("grid item '" + std::string(item) + "': p outside [0,1]");
    out.push_back(std::move(gp));
  }
  if (out.empty()) throw ParseError("empty grid");
  return out;
}

namespace {

TrialRecord run_trial(const GridPoint& gp, const PackingConfig& base, Seed seed) {
  PackingConfig cfg = base;
  cfg.seed = seed;
  TrialRecord t;
  t.n = gp.n;
  t.p = gp.p;
  t.seed = seed;
  const PackingResult res = pack_with_graph(static_cast<Vertex>(gp.n), gp.p, cfg);
  const PackingReport& r = res.report;
  t.delta = r.delta;
  const auto [lo, hi] = min_degree_window(gp.n, gp.p);
  t.delta_in_window = static_cast<double>(r.delta) >= lo && static_cast<double>(r.delta) <= hi;
  t.s_size = res.s_set.size();
  t.s_small = static_cast<double>(t.s_size) <= std::pow(static_cast<double>(gp.n), 0.1);
  t.s_separated = res.g1.vertex_count() == 0 || !has_short_path_between(res.g1, res.s_set, 4);
  t.s_has_min_degree = true;
  if (res.graph.vertex_count() > 0) {
    const std::size_t dmin = res.graph.min_degree();
    for (Vertex v = 0; v < res.graph.vertex_count(); ++v) {
      if (res.graph.degree(v) == dmin &&
          !std::binary_search(res.s_set.begin(), res.s_set.end(), v)) {
        t.s_has_min_degree = false;
        break;
      }
    }
  }
  const double closed_cap = 5.0 * std::sqrt(static_cast<double>(gp.n));
  for (std::size_t c : r.cycles_closed) t.cycles_closed_max = std::max(t.cycles_closed_max, c);
  t.cycles_closed_ok = static_cast<double>(t.cycles_closed_max) <= closed_cap;
  t.k_target = r.k_target;
  t.cycles = r.cycles.size();
  t.outcome = r.outcome;
  t.timing_ms = r.timing_ms;
  return t;
}

}  // namespace

ExperimentReport run_experiment(const std::vector<GridPoint>& grid, std::size_t trials,
                                const PackingConfig& config, const ExperimentOptions& opts) {
  if (grid.empty()) throw InvalidArgument("run_experiment: empty grid");
  validate_config(config);
  ExperimentReport out;
  out.seed = config.seed;
  out.trials = trials;
  out.config = config;
  const std::size_t total = grid.size() * trials;
  std::vector<TrialRecord> recs(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t j = i / trials, t = i % trials;
      recs[i] = run_trial(grid[j], config, derive_seed(config.seed, "trial", j, t));
    }
  };
  std::size_t threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(total, 1));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (std::size_t j = 0; j < grid.size(); ++j) {
    GridAggregate a;
    a.point = grid[j];
    a.trials = trials;
    std::tie(a.window_lo, a.window_hi) = min_degree_window(grid[j].n, grid[j].p);
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialRecord& r = recs[j * trials + t];
      a.rate_delta_in_window += r.delta_in_window;
      a.rate_s_small += r.s_small;
      a.rate_s_separated += r.s_separated;
      a.rate_s_has_min_degree += r.s_has_min_degree;
      a.rate_cycles_closed_ok += r.cycles_closed_ok;
      a.rate_full += r.outcome == Outcome::full;
      a.rate_partial_at_least_k_minus_1 +=
          r.outcome != Outcome::failed && static_cast<std::int64_t>(r.cycles) >= r.k_target - 1;
      a.rate_failed += r.outcome == Outcome::failed;
      a.mean_timing_ms += r.timing_ms;
      a.max_timing_ms = std::max(a.max_timing_ms, r.timing_ms);
      if (opts.keep_records) a.records.push_back(r);
    }
    if (trials > 0) {
      const double d = static_cast<double>(trials);
      for (double* x : {&a.rate_delta_in_window, &a.rate_s_small, &a.rate_s_separated,
                        &a.rate_s_has_min_degree, &a.rate_cycles_closed_ok, &a.rate_full,
                        &a.rate_partial_at_least_k_minus_1, &a.rate_failed, &a.mean_timing_ms})
        *x /= d;
    }
    out.points.push_back(std::move(a));
  }
  return out;
}

std::string experiment_to_json(const ExperimentReport& r) {
  using detail::Json;
  Json j;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["config"] = detail::config_json(r.config);
  j["points"] = Json::array();
  for (const auto& a : r.points) {
    Json pj;
    pj["grid"] = a.point.label;
    pj["n"] = a.point.n;
    pj["p"] = a.point.p;
    pj["trials"] = a.trials;
    pj["delta_window"] = {a.window_lo, a.window_hi};
    pj["rate_delta_in_window"] = a.rate_delta_in_window;
    pj["rate_s_small"] = a.rate_s_small;
    pj["rate_s_separated"] = a.rate_s_separated;
    pj["rate_s_has_min_degree"] = a.rate_s_has_min_degree;
    pj["rate_cycles_closed_ok"] = a.rate_cycles_closed_ok;
    pj["rate_full"] = a.rate_full;
    pj["rate_partial_at_least_k_minus_1"] = a.rate_partial_at_least_k_minus_1;
    pj["rate_failed"] = a.rate_failed;
    pj["mean_timing_ms"] = a.mean_timing_ms;
    pj["max_timing_ms"] = a.max_timing_ms;
    pj["records"] = Json::array();
    for (const auto& t : a.records) {
      pj["records"].push_back({{"seed", t.seed},
                               {"delta", t.delta},
                               {"delta_in_window", t.delta_in_window},
                               {"s_size", t.s_size},
                               {"s_separated", t.s_separated},
                               {"s_has_min_degree", t.s_has_min_degree},
                               {"cycles_closed_max", t.cycles_closed_max},
                               {"k_target", t.k_target},
                               {"cycles", t.cycles},
                               {"outcome", outcome_name(t.outcome)},
                               {"timing_ms", t.timing_ms}});
    }
    j["points"].push_back(std::move(pj));
  }
  return j.dump(2) + "\n";
}

}  // namespace hampack
