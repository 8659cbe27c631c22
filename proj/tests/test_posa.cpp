#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "hampack/error.hpp"
#include "hampack/posa.hpp"
#include "hampack/random_graph.hpp"
#include "oracles.hpp"

using namespace hampack;

namespace {

// g[keep] relabelled to 0..|keep|-1 in the order of keep, plus extra edges
// given in original labels.
Graph compact(const Graph& g, const std::vector<Vertex>& keep, std::span<const Edge> extra = {}) {
  std::vector<Vertex> id(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t t = 0; t < keep.size(); ++t) id[keep[t]] = static_cast<Vertex>(t);
  std::vector<Edge> e;
  for (const Edge& x : g.edges())
    if (id[x.u] >= 0 && id[x.v] >= 0) e.emplace_back(id[x.u], id[x.v]);
  for (const Edge& x : extra) e.emplace_back(id[x.u], id[x.v]);
  return Graph::from_edges(static_cast<Vertex>(keep.size()), e);
}

Graph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return Graph::from_edges(10, e);
}

// Path 0..n-1 plus sparse random chords, randomly relabelled. Returns the
// graph and its Hamilton path.
std::pair<Graph, std::vector<Vertex>> path_with_chords(Vertex n, double q, Rng& rng) {
  std::vector<Vertex> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  rng.shuffle(std::span<Vertex>(label));
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(label[v], label[v + 1]);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 2; b < n; ++b)
      if (rng.bernoulli(q)) e.emplace_back(label[a], label[b]);
  return {Graph::from_edges(n, e), label};
}

}  // namespace

TEST_CASE("exact expander check on fixed graphs") {
  const Graph k5 = fixture::complete_graph(5);
  auto v = check_expander(k5, {2, 1.5}, ExpanderMode::exact);
  CHECK(v.holds);
  CHECK(v.exhaustive);
  CHECK(v.sets_checked == 5 + 10);
  CHECK_FALSE(check_expander(k5, {2, 2.0}, ExpanderMode::exact).holds);

  const Graph p10 = fixture::path_graph(10);
  v = check_expander(p10, {1, 2.0}, ExpanderMode::exact);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness.size() == 1);
  CHECK((v.witness[0] == 0 || v.witness[0] == 9));
  CHECK_THROWS_AS(check_expander(Graph(25), {1, 2.0}, ExpanderMode::exact), InvalidArgument);
  CHECK_THROWS_AS(check_expander(k5, {0, 2.0}, ExpanderMode::exact), InvalidArgument);
}

TEST_CASE("sampled expander check agrees with exact on G(18, 0.5)") {
  const Graph g = gen_gnp(18, 0.5, 4);
  for (std::int64_t m : {1, 2, 3, 4}) {
    for (double c : {1.0, 2.0, 3.0}) {
      const auto exact = check_expander(g, {m, c}, ExpanderMode::exact);
      const auto brute = oracle::expansion_violation(g, m, c);
      CHECK(exact.holds == !brute.has_value());
      const auto sampled = check_expander(g, {m, c}, ExpanderMode::sampled, 20000, 7);
      CHECK_FALSE(sampled.exhaustive);
      if (exact.holds) CHECK(sampled.holds);
      if (!sampled.holds) CHECK(oracle::expansion_violation(compact(g, sampled.witness), 0, c) == std::nullopt);
      if (!sampled.holds) {
        // The witness really fails to expand.
        std::vector<char> in(18, 0), nb(18, 0);
        for (Vertex u : sampled.witness) in[u] = 1;
        for (Vertex u : sampled.witness)
          for (Vertex w : g.neighbors(u)) nb[w] = 1;
        std::size_t boundary = 0;
        for (Vertex w = 0; w < 18; ++w) boundary += nb[w] && !in[w];
        CHECK(static_cast<double>(boundary) < c * static_cast<double>(sampled.witness.size()));
        CHECK(static_cast<std::int64_t>(sampled.witness.size()) <= m);
      }
    }
  }
}

TEST_CASE("attaching separated low-degree vertices keeps expansion") {
  // A set S of vertices of degree >= c-1 with no path of length <= 4 between
  // (possibly equal) S vertices, attached to an (m,c)-expander, leaves an
  // (m,c-1)-expander.
  Rng rng(12);
  int tested = 0;
  for (int t = 0; t < 40000 && tested < 100; ++t) {
    const Vertex core = static_cast<Vertex>(10 + rng.below(7));
    const Vertex extra = static_cast<Vertex>(1 + rng.below(2));
    const Vertex n = core + extra;
    const std::int64_t m = 1 + static_cast<std::int64_t>(rng.below(2));
    const double c = 3.0;
    std::vector<Edge> e;
    for (Vertex a = 0; a < core; ++a)
      for (Vertex b = a + 1; b < core; ++b)
        if (rng.bernoulli(0.45)) e.emplace_back(a, b);
    const Graph h = Graph::from_edges(core, e);
    if (!check_expander(h, {m, c}, ExpanderMode::exact).holds) continue;
    for (Vertex s = core; s < n; ++s) {
      const Vertex a = static_cast<Vertex>(rng.below(core));
      Vertex b = static_cast<Vertex>(rng.below(core));
      if (b == a) b = (a + 1) % core;
      e.emplace_back(s, a);
      e.emplace_back(s, b);
    }
    const Graph g = Graph::from_edges(n, e);
    // Hypothesis check by BFS: distance between S vertices above 4, and no
    // cycle of length <= 4 through an S vertex.
    bool ok = true;
    for (Vertex s = core; s < n && ok; ++s) {
      std::vector<int> d(static_cast<std::size_t>(n), -1);
      std::vector<Vertex> q{s};
      d[s] = 0;
      for (std::size_t i = 0; i < q.size(); ++i)
        for (Vertex w : g.neighbors(q[i]))
          if (d[w] < 0) {
            d[w] = d[q[i]] + 1;
            q.push_back(w);
          }
      for (Vertex o = core; o < n; ++o)
        if (o != s && d[o] >= 0 && d[o] <= 4) ok = false;
      const auto nb = g.neighbors(s);
      for (std::size_t i = 0; i < nb.size() && ok; ++i) {
        // Distance in g - s between two neighbours of s must exceed 2.
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          if (g.has_edge(nb[i], nb[j])) ok = false;
          for (Vertex w : g.neighbors(nb[i]))
            if (w != s && g.has_edge(w, nb[j])) ok = false;
        }
      }
    }
    if (!ok) continue;
    ++tested;
    CHECK(check_expander(g, {m, c - 1}, ExpanderMode::exact).holds);
  }
  CHECK(tested >= 20);
}

TEST_CASE("Hamilton oracle on fixed graphs") {
  const auto k4 = hamilton_oracle_small(fixture::complete_graph(4));
  REQUIRE(k4);
  CHECK(is_hamilton_cycle(fixture::complete_graph(4), *k4));
  const Graph star = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
  CHECK_FALSE(hamilton_oracle_small(star));
  CHECK_FALSE(hamilton_oracle_small(petersen()));
  CHECK_FALSE(oracle::is_hamiltonian(petersen()));
  CHECK_FALSE(hamilton_oracle_small(Graph(2)));
  CHECK_THROWS_AS(hamilton_oracle_small(Graph(15)), InvalidArgument);
}

TEST_CASE("Hamilton oracle agrees with backtracking") {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<Vertex>(3 + rng.below(8));
    const Graph g = gen_gnp(n, 0.2 + 0.4 * rng.uniform01(), rng());
    const auto c = hamilton_oracle_small(g);
    CHECK(c.has_value() == oracle::is_hamiltonian(g));
    if (c) CHECK(is_hamilton_cycle(g, *c));
  }
}

TEST_CASE("trichotomy on fixed graphs") {
  const Graph c5 = fixture::cycle_graph(5);
  const std::vector<Vertex> p5{0, 1, 2, 3, 4};
  auto out = posa_trichotomy(c5, p5);
  CHECK(out.kind == TrichotomyKind::HamiltonianSpan);
  CHECK(is_hamilton_cycle(c5, out.cycle));

  const Graph p4 = fixture::path_graph(4);
  out = posa_trichotomy(p4, std::vector<Vertex>{0, 1, 2, 3});
  CHECK(out.kind == TrichotomyKind::BoosterSet);
  CHECK(std::find(out.boosters.begin(), out.boosters.end(), Edge(0, 3)) != out.boosters.end());
  const auto real = realize_booster(p4, std::vector<Vertex>{0, 1, 2, 3}, Edge(0, 3));
  REQUIRE(real);
  CHECK(is_hamilton_cycle(graph_union(p4, Graph::from_edges(4, std::vector<Edge>{{0, 3}})), *real));

  // A path inside a larger graph with an outside neighbour of its end.
  out = posa_trichotomy(fixture::path_graph(6), std::vector<Vertex>{0, 1, 2, 3});
  CHECK(out.kind == TrichotomyKind::ExtendablePath);
  CHECK(out.outside == 4);
  CHECK(out.path.back() == 3);

  CHECK_THROWS_AS(posa_trichotomy(p4, std::vector<Vertex>{0, 2}), InvalidArgument);
  CHECK_THROWS_AS(posa_trichotomy(p4, std::vector<Vertex>{}), InvalidArgument);
}

TEST_CASE("trichotomy outcomes are certified on small graphs") {
  Rng rng(31);
  int boosters = 0, spans = 0, extends = 0;
  for (int t = 0; t < 400; ++t) {
    const auto n = static_cast<Vertex>(5 + rng.below(10));
    auto [g, path] = path_with_chords(n, 0.1 + 0.2 * rng.uniform01(), rng);
    const auto len = static_cast<std::size_t>(3 + rng.below(static_cast<std::uint64_t>(n) - 2));
    path.resize(len);
    PosaOptions opt;
    opt.seed = rng();
    const auto out = posa_trichotomy(g, path, opt);
    const Graph sub = compact(g, path);
    switch (out.kind) {
      case TrichotomyKind::ExtendablePath: {
        ++extends;
        CHECK(out.path.size() == len);
        CHECK(g.has_edge(out.path.back(), out.outside));
        CHECK(std::find(path.begin(), path.end(), out.outside) == path.end());
        break;
      }
      case TrichotomyKind::HamiltonianSpan: {
        ++spans;
        std::vector<Vertex> id(static_cast<std::size_t>(n), -1);
        for (std::size_t i = 0; i < len; ++i) id[path[i]] = static_cast<Vertex>(i);
        std::vector<Vertex> local;
        for (Vertex v : out.cycle) local.push_back(id[v]);
        CHECK(is_hamilton_cycle(sub, local));
        break;
      }
      case TrichotomyKind::BoosterSet:
        for (const Edge& b : out.boosters) {
          ++boosters;
          CHECK_FALSE(g.has_edge(b.u, b.v));
          const Edge one[1] = {b};
          CHECK(hamilton_oracle_small(compact(g, path, one)).has_value());
        }
        break;
    }
  }
  CHECK(boosters > 0);
  CHECK(spans > 0);
  CHECK(extends > 0);
}

TEST_CASE("path system order") {
  const PathOrderKey one{1, {10}}, split{2, {6, 4}}, skew{2, {7, 3}};
  CHECK(compare_path_systems(one, split) == std::weak_ordering::less);
  CHECK(compare_path_systems(skew, split) == std::weak_ordering::less);
  CHECK(compare_path_systems(split, skew) == std::weak_ordering::greater);
  CHECK(compare_path_systems(split, split) == std::weak_ordering::equivalent);
  PathSystem ps{6, {{5}, {0, 1, 2}, {3, 4}}};
  const auto key = PathOrderKey::of(ps);
  CHECK(key.s == 3);
  CHECK(key.lengths == std::vector<std::size_t>{3, 2, 1});
}

TEST_CASE("normalize fixed cases") {
  const Graph p6 = fixture::path_graph(6);
  const PathSystem single{6, {{0, 1, 2, 3, 4, 5}}};
  CHECK(normalize_extremal(p6, single) == single);

  const Graph p4 = fixture::path_graph(4);
  const PathSystem two{4, {{0, 1}, {2, 3}}};
  const auto out = normalize_extremal(p4, two);
  REQUIRE(out.size() == 1);
  const auto& path = out.paths[0];
  CHECK((path == std::vector<Vertex>{0, 1, 2, 3} || path == std::vector<Vertex>{3, 2, 1, 0}));
  CHECK_THROWS_AS(normalize_extremal(p4, PathSystem{4, {{0, 2}, {1}, {3}}}), InvalidArgument);
  CHECK_THROWS_AS(normalize_extremal(p4, PathSystem{4, {{0, 1}}}), InvalidArgument);
}

TEST_CASE("normalize never worsens and reaches an endpoint fixpoint") {
  Rng rng(77);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<Vertex>(2 + rng.below(11));
    const Graph g = gen_gnp(n, 0.15 + 0.3 * rng.uniform01(), rng());
    // Start from trivial paths plus a few greedy edges.
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<Vertex>(order));
    PathSystem ps{n, {}};
    std::vector<Vertex> cur;
    for (Vertex v : order) {
      if (!cur.empty() && !g.has_edge(cur.back(), v)) {
        ps.paths.push_back(cur);
        cur.clear();
      }
      cur.push_back(v);
    }
    ps.paths.push_back(cur);
    NormalizeStats stats;
    NormalizeOptions opt;
    opt.seed = rng();
    const auto out = normalize_extremal(g, ps, opt, &stats);
    validate_path_system(out, &g);
    CHECK(compare_path_systems(PathOrderKey::of(out), PathOrderKey::of(ps)) != std::weak_ordering::greater);
    for (std::size_t r = 1; r < out.size(); ++r) CHECK(out.paths[r - 1].size() >= out.paths[r].size());
    if (stats.budget_exhausted) continue;
    // No end of a path sees a later path.
    std::vector<std::size_t> rank(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < out.size(); ++r)
      for (Vertex v : out.paths[r]) rank[v] = r;
    for (std::size_t r = 0; r < out.size(); ++r)
      for (Vertex end : {out.paths[r].front(), out.paths[r].back()})
        for (Vertex w : g.neighbors(end)) CHECK(rank[w] <= r);
  }
}

TEST_CASE("merge round closes a single Hamiltonian path") {
  const Graph c6 = fixture::cycle_graph(6);
  MergeState st;
  st.paths = {6, {{0, 1, 2, 3, 4, 5}}};
  st.forbidden = Graph(6);
  st.min_degree = 2;
  const auto res = merge_round(st, c6, {}, {1, 2.0});
  CHECK(res.status == MergeStatus::Cycle);
  CHECK(is_hamilton_cycle(c6, res.cycle));
  CHECK(res.layer_used.empty());
}

TEST_CASE("merge round retries on an empty layer") {
  const Graph p5 = fixture::path_graph(5);
  MergeState st;
  st.paths = {5, {{0, 1, 2, 3, 4}}};
  st.forbidden = Graph(5);
  st.min_degree = 1;
  const auto res = merge_round(st, p5, {}, {1, 2.0});
  CHECK(res.status == MergeStatus::Retry);
  CHECK(res.boosters > 0);
  CHECK(st.paths.size() == 1);

  // The same path with a booster in the layer closes.
  const Edge layer[1] = {{0, 4}};
  const auto hit = merge_round(st, p5, layer, {1, 2.0});
  CHECK(hit.status == MergeStatus::Cycle);
  CHECK(is_hamilton_cycle(graph_union(p5, Graph::from_edges(5, layer)), hit.cycle));

  // Layer pairs touching S or lying in Gamma are ignored.
  st.in_s.assign(5, 0);
  st.in_s[4] = 1;
  CHECK(merge_round(st, p5, layer, {1, 2.0}).status == MergeStatus::Retry);
  st.in_s.clear();
  st.forbidden = Graph::from_edges(5, layer);
  st.min_degree = 3;
  CHECK(merge_round(st, p5, layer, {1, 2.0}).status == MergeStatus::Retry);
}

TEST_CASE("merge round bridges two Hamiltonian spans on 12 vertices") {
  // Two disjoint 6-cycles, one bridge in the layer.
  std::vector<Edge> e;
  for (Vertex v = 0; v < 6; ++v) {
    e.emplace_back(v, (v + 1) % 6);
    e.emplace_back(6 + v, 6 + (v + 1) % 6);
  }
  const Graph base = Graph::from_edges(12, e);
  for (Vertex b = 6; b < 12; ++b) {
    MergeState st;
    st.paths = {12, {{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10, 11}}};
    st.forbidden = Graph(12);
    st.min_degree = 2;
    const Edge layer[1] = {{2, b}};
    const auto res = merge_round(st, base, layer, {1, 2.0});
    REQUIRE(res.status == MergeStatus::Advanced);
    REQUIRE(st.paths.size() == 1);
    const auto& path = st.paths.paths[0];
    const Graph combined = graph_union(base, Graph::from_edges(12, layer));
    validate_path_system(st.paths, &combined);
    const Edge close[1] = {{path.front(), path.back()}};
    CHECK(hamilton_oracle_small(graph_union(combined, Graph::from_edges(12, close))).has_value());
  }
}

TEST_CASE("merge round enforces the forbidden-degree contract") {
  const Graph c6 = fixture::cycle_graph(6);
  MergeState st;
  st.paths = {6, {{0, 1, 2, 3, 4, 5}}};
  st.forbidden = Graph::from_edges(6, std::vector<Edge>{{0, 2}});
  st.min_degree = 2;
  CHECK_THROWS_AS(merge_round(st, c6, {}, {1, 2.0}), ContractViolation);
}
