#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "hampack/error.hpp"
#include "hampack/random_graph.hpp"
#include "hampack/regular.hpp"
#include "oracles.hpp"

using namespace hampack;

namespace {

std::vector<std::vector<char>> dense_adj(const BipartitePair& bp) {
  std::vector<std::vector<char>> adj(bp.left_size(), std::vector<char>(bp.right_size(), 0));
  for (std::size_t i = 0; i < bp.left_size(); ++i)
    for (auto j : bp.left_neighbors(i)) adj[i][static_cast<std::size_t>(j)] = 1;
  return adj;
}

std::vector<std::size_t> all_idx(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST_CASE("trim leaves an in-window pair untouched") {
  const auto bp = fixture::random_regular_pair(40, 5, 1);
  const DegreeWindow w{5.0, 1.0, 0.0};
  const auto r = trim_balanced(bp, w, 100, 3);
  CHECK_FALSE(r.aborted);
  CHECK(r.removed_minus.empty());
  CHECK(r.removed_plus.empty());
  CHECK(r.h == bp);
}

TEST_CASE("trim evicts one isolated left vertex with one partner") {
  // Left 0..3, right 4..7; left 0 isolated, everything else complete.
  std::vector<Edge> e;
  for (Vertex a = 1; a < 4; ++a)
    for (Vertex b = 4; b < 8; ++b) e.emplace_back(a, b);
  const BipartitePair bp({0, 1, 2, 3}, {4, 5, 6, 7}, e);
  const DegreeWindow w{2.5, 1.5, 0.0};  // [1, 4]
  const auto r = trim_balanced(bp, w, 10, 7);
  CHECK_FALSE(r.aborted);
  REQUIRE(r.removed_minus.size() == 1);
  CHECK(r.removed_minus[0].first == 0);
  CHECK(r.removed_plus.empty());
  CHECK(r.h.left_size() == 3);
  CHECK(r.h.right_size() == 3);
}

TEST_CASE("trim at n=2000, p=0.02, c=0.75 lands in the window") {
  const auto bp = gen_bipartite_gnnp(2000, 0.02, 5);
  const auto w = DegreeWindow::around(2000, 0.02, 0.75);
  const auto r = trim_balanced(bp, w, default_z_cap(2000, 0.75), 9);
  REQUIRE_FALSE(r.aborted);
  CHECK(r.h.left_size() == r.h.right_size());
  for (std::size_t i = 0; i < r.h.left_size(); ++i) CHECK(w.contains(static_cast<std::int64_t>(r.h.left_degree(i))));
  for (std::size_t j = 0; j < r.h.right_size(); ++j) CHECK(w.contains(static_cast<std::int64_t>(r.h.right_degree(j))));
  CHECK(r.h.left_size() + r.removed_minus.size() + r.removed_plus.size() == 2000);
}

TEST_CASE("trim aborts at the cap") {
  const auto bp = gen_bipartite_gnnp(200, 0.01, 5);
  const DegreeWindow w{10.0, 1.0, 0.0};
  const auto r = trim_balanced(bp, w, 3, 1);
  CHECK(r.aborted);
  CHECK(r.removed_minus.size() == 3);
  CHECK_THROWS_AS(trim_balanced(BipartitePair({0}, {1, 2}, {}), w, 3, 1), InvalidArgument);
}

TEST_CASE("bal_deficiency examples") {
  const auto k33 = fixture::complete_pair(3);
  const auto idx = all_idx(3);
  CHECK(bal_deficiency(k33, 2, {}, idx) == 0);
  for (std::int64_t k = 0; k <= 3; ++k) CHECK(bal_deficiency(k33, k, idx, idx) == 9 - 3 * k);
  const BipartitePair single({0, 1}, {2, 3}, std::vector<Edge>{{0, 2}});
  const auto two = all_idx(2);
  CHECK(bal_deficiency(single, 1, two, two) == -1);
  CHECK_FALSE(extract_k_factor(single, 1).factor.has_value());
}

TEST_CASE("extract_k_factor fixed cases") {
  const auto k33 = fixture::complete_pair(3);
  const auto f = extract_k_factor(k33, 3);
  REQUIRE(f.factor);
  CHECK(f.factor->graph == k33);
  const auto hex = fixture::hexagon_pair();
  const auto h = extract_k_factor(hex, 2);
  REQUIRE(h.factor);
  CHECK(h.factor->graph == hex);
  CHECK_FALSE(extract_k_factor(hex, 3).factor.has_value());
  CHECK(extract_k_factor(hex, 3).flow < extract_k_factor(hex, 3).required);
  CHECK(extract_k_factor(hex, 0).factor->graph.edge_count() == 0);
  CHECK_THROWS_AS(extract_k_factor(hex, 4), InvalidArgument);
}

TEST_CASE("extract_k_factor agrees with exhaustive bal on small pairs") {
  Rng rng(21);
  int agree = 0, total = 0;
  for (int t = 0; t < 60; ++t) {
    const auto n = static_cast<Vertex>(1 + rng.below(5));
    const auto bp = gen_bipartite_gnnp(n, 0.3 + 0.6 * rng.uniform01(), rng());
    const auto adj = dense_adj(bp);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
      const auto res = extract_k_factor(bp, k);
      const bool feasible = oracle::min_bal(adj, static_cast<std::int64_t>(k)) >= 0;
      ++total;
      agree += res.factor.has_value() == feasible;
      if (res.factor) CHECK(is_k_factor_of(res.factor->graph, bp, k));
    }
  }
  CHECK(agree == total);
}

TEST_CASE("bal is nonnegative on sampled sets whenever a factor exists") {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const auto bp = gen_bipartite_gnnp(30, 0.4, rng());
    const auto res = extract_k_factor(bp, 6);
    if (!res.factor) continue;
    std::int64_t worst = INT64_MAX;
    for (int s = 0; s < 10000; ++s) {
      std::vector<std::size_t> x, y;
      for (std::size_t i = 0; i < 30; ++i) {
        if (rng.below(2)) x.push_back(i);
        if (rng.below(2)) y.push_back(i);
      }
      worst = std::min(worst, bal_deficiency(bp, 6, x, y));
    }
    CHECK(worst >= 0);
  }
}

TEST_CASE("bisection schedule at n=2^20, p=2^-10, c=1/3") {
  // 50-digit evaluation of the level formulas.
  const std::int64_t n = 1 << 20;
  const double p = 1.0 / 1024.0, c = 1.0 / 3.0;
  CHECK(bisection_depth(n, p, c) == 7);
  const std::int64_t k_want[] = {507, 253, 125, 62, 30, 15, 7};
  const std::int64_t m_want[] = {130, 61, 29, 13, 6, 3, 1};
  for (int i = 1; i <= 7; ++i) {
    CHECK(level_k(n, p, c, i) == k_want[i - 1]);
    CHECK(level_m(n, c, i) == m_want[i - 1]);
  }
  const double np = n * p, logn = std::log(static_cast<double>(n));
  const double target = c / 4.0 * std::sqrt(np * logn);
  CHECK(p * std::ldexp(double(n), -7) < target);
  CHECK(target <= p * std::ldexp(double(n), -6));
  // Unfloored k_i sum against np/2 - (c/2) sqrt(np log n).
  double sum = 0;
  for (int i = 2; i <= 7; ++i) {
    const double a = np / std::ldexp(1.0, i);
    sum += a - c / 7.0 * std::sqrt(a * logn);
  }
  CHECK(sum >= np / 2 - c / 2 * std::sqrt(np * logn));
}

TEST_CASE("bisection depth is minimal") {
  for (std::int64_t n : {500, 2000, 4096, 100000}) {
    for (double mult : {2.0, 4.0, 16.0}) {
      const double p = mult * std::log(double(n)) / double(n);
      const double c = 1.0 / 3.0;
      const int ell = bisection_depth(n, p, c);
      const double target = c / 4.0 * std::sqrt(n * p * std::log(double(n)));
      const int cap = static_cast<int>(std::floor(std::log2(double(n))));
      if (ell < cap) CHECK(p * std::ldexp(double(n), -ell) < target);
      if (ell > 1) CHECK(p * std::ldexp(double(n), -(ell - 1)) >= target);
    }
  }
}

TEST_CASE("bisection parts nest and have the right sizes") {
  const Vertex n = 1000;
  const auto sch = bisection_schedule(n, 0.05, 1.0 / 3.0, 3);
  REQUIRE(sch.ell >= 2);
  for (int i = 1; i <= sch.ell; ++i) {
    const auto& lvl = sch.level(i);
    CHECK(lvl.parts.size() == (std::size_t{1} << i) + 1);
    std::vector<int> seen(n, 0);
    for (std::size_t j = 0; j < lvl.parts.size(); ++j) {
      if (j > 0) CHECK(lvl.parts[j].size() == static_cast<std::size_t>(n >> i));
      for (Vertex v : lvl.parts[j]) ++seen[v];
    }
    for (int s : seen) CHECK(s == 1);
    if (i == 1) continue;
    const auto& up = sch.level(i - 1);
    for (std::size_t j = 1; j < lvl.parts.size(); ++j) {
      const auto& parent = up.parts[(j + 1) / 2];
      for (Vertex v : lvl.parts[j]) CHECK(std::find(parent.begin(), parent.end(), v) != parent.end());
    }
  }
}

TEST_CASE("regular_for_pair returns an already regular pair unchanged") {
  const auto bp = fixture::random_regular_pair(50, 6, 2);
  Graph g = Graph::from_edges(100, bp.cross_edges());
  const auto pf = regular_for_pair(g, bp.left(), bp.right(), 6, 6.0 / 50.0, 0.1, 1, 1, 1);
  REQUIRE(pf.factor);
  CHECK(pf.factor->graph == bp);
  CHECK(pf.shortfalls.empty());
}

TEST_CASE("level regulars at n=4096, p=4 log n/n, level 2") {
  const Vertex n = 4096;
  const double p = 4.0 * std::log(4096.0) / 4096.0;
  const Graph g = gen_gnp(n, p, 11);
  const auto sch = bisection_schedule(n, p, 1.0 / 3.0, 12);
  REQUIRE(sch.ell >= 2);
  const auto lr = build_level_regulars(g, sch, 2, 13);
  std::vector<int> used(n, 0);
  for (const auto& f : lr.factors) {
    const auto host = BipartitePair::induced(g, f.graph.left(), f.graph.right());
    CHECK(is_k_factor_of(f.graph, host, f.k));
    CHECK(f.k >= 1);
    CHECK(static_cast<std::int64_t>(f.k) <= sch.level(2).k_i);
    for (Vertex v : f.graph.left()) ++used[v];
    for (Vertex v : f.graph.right()) ++used[v];
  }
  for (int u : used) CHECK(u <= 1);
  for (const auto& s : lr.shortfalls) CHECK(s.level == 2);
  CHECK_THROWS_AS(build_level_regulars(g, sch, sch.ell + 1, 1), InvalidArgument);
}
