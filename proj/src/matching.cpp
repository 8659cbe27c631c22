#include "hampack/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

namespace hampack {

bool is_matching(std::span<const Edge> edges) {
  std::vector<Vertex> ends;
  ends.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    ends.push_back(e.u);
    ends.push_back(e.v);
  }
  std::sort(ends.begin(), ends.end());
  return std::adjacent_find(ends.begin(), ends.end()) == ends.end();
}

std::vector<std::int32_t> hopcroft_karp(const std::vector<std::vector<std::int32_t>>& adj,
                                        std::size_t right_size) {
  const std::size_t n = adj.size();
  constexpr std::int32_t kFree = -1;
  constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();
  std::vector<std::int32_t> mate_l(n, kFree), mate_r(right_size, kFree), dist(n);
  std::vector<std::size_t> it(n);
  std::vector<std::int32_t> stack;

  auto bfs = [&]() {
    std::queue<std::int32_t> q;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (mate_l[i] == kFree) {
        dist[i] = 0;
        q.push(static_cast<std::int32_t>(i));
      } else {
        dist[i] = kInf;
      }
    }
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto j : adj[u]) {
        const auto w = mate_r[j];
        if (w == kFree) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative layered DFS from a free left vertex.
  auto augment = [&](std::int32_t root) {
    stack.clear();
    stack.push_back(root);
    while (!stack.empty()) {
      const auto u = stack.back();
      bool advanced = false;
      while (it[u] < adj[u].size()) {
        const auto j = adj[u][it[u]];
        const auto w = mate_r[j];
        if (w == kFree) {
          // Flip the alternating path held on the stack.
          std::int32_t right = j;
          for (std::size_t d = stack.size(); d-- > 0;) {
            const auto left = stack[d];
            const auto prev = mate_l[left];
            mate_l[left] = right;
            mate_r[right] = left;
            right = prev;
          }
          return true;
        }
        if (dist[w] == dist[u] + 1) {
          stack.push_back(w);
          advanced = true;
          break;
        }
        ++it[u];
      }
      if (!advanced) {
        dist[u] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++it[stack.back()];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mate_l[i] == kFree) augment(static_cast<std::int32_t>(i));
    }
  }
  return mate_l;
}

namespace {

void require_regular(const RegularSubgraph& h) {
  const auto& g = h.graph;
  if (g.left_size() != g.right_size()) throw InvalidArgument("regular subgraph must be balanced");
  for (std::size_t i = 0; i < g.left_size(); ++i) {
    if (g.left_degree(i) != h.k) throw InvalidArgument("input is not k-regular");
  }
  for (std::size_t j = 0; j < g.right_size(); ++j) {
    if (g.right_degree(j) != h.k) throw InvalidArgument("input is not k-regular");
  }
}

}  // namespace

std::vector<Matching> decompose_regular(const RegularSubgraph& h, Seed seed) {
  require_regular(h);
  const auto& g = h.graph;
  const std::size_t n = g.left_size();
  Rng rng = Rng::stream(seed, "decompose");
  std::vector<std::vector<std::int32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = g.left_neighbors(i);
    adj[i].assign(nb.begin(), nb.end());
  }
  std::vector<Matching> out;
  out.reserve(h.k);
  for (std::size_t round = 0; round < h.k; ++round) {
    for (auto& a : adj) rng.shuffle(std::span<std::int32_t>(a));
    const auto mate = hopcroft_karp(adj, n);
    Matching m;
    m.edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      // A regular bipartite graph always has a perfect matching.
      if (mate[i] < 0) throw ContractViolation("regular remainder lacks a perfect matching");
      m.edges.emplace_back(g.left()[i], g.right()[mate[i]]);
      auto& a = adj[i];
      a.erase(std::find(a.begin(), a.end(), mate[i]));
    }
    std::sort(m.edges.begin(), m.edges.end());
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Matching> random_ordered_decomposition(const RegularSubgraph& h, Seed seed) {
  auto out = decompose_regular(h, derive_seed(seed, "search"));
  Rng rng = Rng::stream(seed, "order");
  rng.shuffle(std::span<Matching>(out));
  return out;
}

InnerMatchings build_inner_matchings(const Graph& g, const BisectionSchedule& schedule,
                                     std::size_t k, Seed seed, bool allow_reduced) {
  InnerMatchings out;
  for (int i = 2; i <= schedule.ell; ++i) {
    auto lvl = build_level_regulars(g, schedule, i, derive_seed(seed, "level-regulars", static_cast<std::uint64_t>(i)),
                                    allow_reduced);
    out.shortfalls.insert(out.shortfalls.end(), lvl.shortfalls.begin(), lvl.shortfalls.end());
    std::vector<Matching> merged;
    for (std::size_t j = 0; j < lvl.factors.size(); ++j) {
      auto parts = decompose_regular(lvl.factors[j], derive_seed(seed, "inner", static_cast<std::uint64_t>(i), j));
      if (merged.size() < parts.size()) merged.resize(parts.size());
      for (std::size_t s = 0; s < parts.size(); ++s) {
        merged[s].edges.insert(merged[s].edges.end(), parts[s].edges.begin(), parts[s].edges.end());
      }
    }
    for (auto& m : merged) {
      std::sort(m.edges.begin(), m.edges.end());
      out.matchings.push_back(std::move(m));
    }
  }
  std::stable_sort(out.matchings.begin(), out.matchings.end(),
                   [](const Matching& a, const Matching& b) { return a.size() > b.size(); });
  if (out.matchings.size() > k) out.matchings.resize(k);
  if (out.matchings.size() < k) {
    out.shortfalls.push_back({"inner_matchings", 0, 0, "too_few_matchings",
                              static_cast<std::int64_t>(k),
                              static_cast<std::int64_t>(out.matchings.size())});
  }
  return out;
}

PerfectExtension extend_to_perfect(const Matching& base, std::span<const Vertex> a,
                                   std::span<const Vertex> b, Seed seed) {
  if (a.size() != b.size()) throw InvalidArgument("extend_to_perfect: |A| != |B|");
  Vertex top = 0;
  for (Vertex v : a) top = std::max(top, v + 1);
  for (Vertex v : b) top = std::max(top, v + 1);
  std::vector<char> side(static_cast<std::size_t>(top), 0);
  for (Vertex v : a) side[v] = 1;
  for (Vertex v : b) {
    if (side[v] == 1) throw InvalidArgument("extend_to_perfect: A and B overlap");
    side[v] = 2;
  }
  std::vector<char> covered(static_cast<std::size_t>(top), 0);
  for (const Edge& e : base.edges) {
    if (e.v >= top || side[e.u] == 0 || side[e.v] == 0 || side[e.u] == side[e.v])
      throw InvalidArgument("extend_to_perfect: base edge does not join A and B");
    if (covered[e.u] || covered[e.v]) throw InvalidArgument("extend_to_perfect: base is not a matching");
    covered[e.u] = covered[e.v] = 1;
  }
  std::vector<Vertex> free_a, free_b;
  for (Vertex v : a) {
    if (!covered[v]) free_a.push_back(v);
  }
  for (Vertex v : b) {
    if (!covered[v]) free_b.push_back(v);
  }
  if (free_a.size() != free_b.size())
    throw InvalidArgument("extend_to_perfect: uncovered counts differ");
  Rng rng = Rng::stream(seed, "extend");
  rng.shuffle(std::span<Vertex>(free_b));
  PerfectExtension ext;
  ext.base = base;
  for (std::size_t t = 0; t < free_a.size(); ++t) ext.synthetic_edges.emplace_back(free_a[t], free_b[t]);
  std::sort(ext.synthetic_edges.begin(), ext.synthetic_edges.end());
  ext.total.edges = base.edges;
  ext.total.edges.insert(ext.total.edges.end(), ext.synthetic_edges.begin(), ext.synthetic_edges.end());
  std::sort(ext.total.edges.begin(), ext.total.edges.end());
  return ext;
}

void validate_path_system(const PathSystem& ps, const Graph* g) {
  std::vector<char> seen(static_cast<std::size_t>(ps.n), 0);
  std::size_t count = 0;
  for (const auto& path : ps.paths) {
    if (path.empty()) throw InvalidArgument("path system holds an empty path");
    for (std::size_t t = 0; t < path.size(); ++t) {
      const Vertex v = path[t];
      if (v < 0 || v >= ps.n) throw InvalidArgument("path vertex out of range");
      if (seen[v]) throw InvalidArgument("paths are not vertex-disjoint (vertex " + std::to_string(v) + ")");
      seen[v] = 1;
      ++count;
      if (g && t > 0 && !g->has_edge(path[t - 1], v))
        throw InvalidArgument("path uses a non-edge {" + std::to_string(path[t - 1]) + "," +
                              std::to_string(v) + "}");
    }
  }
  if (count != static_cast<std::size_t>(ps.n)) throw InvalidArgument("path system does not cover every vertex");
}

std::vector<Edge> path_edges(const PathSystem& ps) {
  std::vector<Edge> out;
  for (const auto& path : ps.paths) {
    for (std::size_t t = 1; t < path.size(); ++t) out.emplace_back(path[t - 1], path[t]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

AssembledPaths assemble_path_system(const Matching& m, const PerfectExtension& ext, Vertex n,
                                    Seed seed) {
  const auto nn = static_cast<std::size_t>(n);
  // Each vertex has at most one M edge and one N' edge.
  std::vector<Vertex> via_m(nn, -1), via_n(nn, -1), via_real(nn, -1);
  auto put = [&](std::vector<Vertex>& slot, const Edge& e, const char* what) {
    if (e.u < 0 || e.v >= n) throw InvalidArgument("assemble_path_system: edge out of range");
    if (slot[e.u] != -1 || slot[e.v] != -1)
      throw ContractViolation(std::string("assemble_path_system: ") + what + " is not a matching");
    slot[e.u] = e.v;
    slot[e.v] = e.u;
  };
  for (const Edge& e : m.edges) put(via_m, e, "M");
  for (const Edge& e : ext.total.edges) put(via_n, e, "N'");
  for (const Edge& e : ext.base.edges) put(via_real, e, "N");
  for (const Edge& e : m.edges) {
    if (via_n[e.u] == e.v) throw ContractViolation("assemble_path_system: M and N' share an edge");
  }

  AssembledPaths out;
  out.paths.n = n;
  out.stats.dropped_edges = ext.synthetic_edges.size();
  for (std::size_t v = 0; v < nn; ++v) out.stats.isolated_in_m += via_m[v] == -1;

  // Cycles of M u N' (alternating, so every component is a path or cycle).
  {
    std::vector<char> seen(nn, 0);
    for (std::size_t s = 0; s < nn; ++s) {
      if (seen[s] || via_m[s] == -1 || via_n[s] == -1) continue;
      // Walk forward alternating M then N'; a closed walk back to s is a cycle.
      Vertex v = static_cast<Vertex>(s);
      bool use_m = true, closed = false;
      for (;;) {
        seen[v] = 1;
        const Vertex w = use_m ? via_m[v] : via_n[v];
        if (w == -1) break;
        use_m = !use_m;
        if (w == static_cast<Vertex>(s)) {
          closed = true;
          break;
        }
        v = w;
      }
      if (closed) {
        ++out.stats.cycles_closed;
      } else {
        // Mark the rest of the open component from the other direction.
        v = static_cast<Vertex>(s);
        use_m = false;
        for (;;) {
          seen[v] = 1;
          const Vertex w = use_m ? via_m[v] : via_n[v];
          if (w == -1 || seen[w]) break;
          use_m = !use_m;
          v = w;
        }
      }
    }
  }

  // Components of M u N (real edges), cycles cut at a uniform edge.
  Rng rng = Rng::stream(seed, "assemble");
  std::vector<char> seen(nn, 0);
  auto other = [&](Vertex v, Vertex from) {
    // Next vertex along the union leaving v, not returning to `from`.
    const Vertex a = via_m[v], b = via_real[v];
    if (a != -1 && a != from) return a;
    if (b != -1 && b != from) return b;
    if (a != -1 && b != -1 && a == b) return Vertex{-1};
    return Vertex{-1};
  };
  auto degree = [&](Vertex v) { return (via_m[v] != -1) + (via_real[v] != -1); };
  // Open components first: start at an endpoint (degree <= 1).
  for (std::size_t s = 0; s < nn; ++s) {
    const auto v0 = static_cast<Vertex>(s);
    if (seen[v0] || degree(v0) > 1) continue;
    std::vector<Vertex> path{v0};
    seen[v0] = 1;
    Vertex prev = -1, cur = v0;
    for (;;) {
      const Vertex nxt = other(cur, prev);
      if (nxt == -1 || seen[nxt]) break;
      path.push_back(nxt);
      seen[nxt] = 1;
      prev = cur;
      cur = nxt;
    }
    out.paths.paths.push_back(std::move(path));
  }
  // Remaining vertices lie on cycles.
  for (std::size_t s = 0; s < nn; ++s) {
    const auto v0 = static_cast<Vertex>(s);
    if (seen[v0]) continue;
    std::vector<Vertex> cyc{v0};
    seen[v0] = 1;
    Vertex prev = -1, cur = v0;
    for (;;) {
      const Vertex nxt = other(cur, prev);
      if (nxt == -1 || seen[nxt]) break;
      cyc.push_back(nxt);
      seen[nxt] = 1;
      prev = cur;
      cur = nxt;
    }
    // Remove edge (cyc[r], cyc[r+1 mod L]): the path starts at cyc[r+1].
    const auto len = cyc.size();
    const auto r = static_cast<std::size_t>(rng.below(len));
    std::vector<Vertex> path;
    path.reserve(len);
    for (std::size_t t = 1; t <= len; ++t) path.push_back(cyc[(r + t) % len]);
    out.paths.paths.push_back(std::move(path));
  }
  out.stats.path_count = out.paths.paths.size();
  return out;
}

}  // namespace hampack
