#include "hampack/posa.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace hampack {

// ---------------------------------------------------------------------------
// Expander checks

namespace {

bool expands(std::size_t boundary, std::size_t size, double c) {
  return static_cast<double>(boundary) >= c * static_cast<double>(size);
}

}  // namespace

ExpanderVerdict check_expander(const Graph& g, const ExpanderParams& params, ExpanderMode mode,
                               std::size_t samples, Seed seed) {
  if (params.m < 1 || !(params.c > 0.0)) throw InvalidArgument("check_expander: need m >= 1 and c > 0");
  const Vertex n = g.vertex_count();
  ExpanderVerdict out;
  const auto m = static_cast<std::size_t>(std::min<std::int64_t>(params.m, n));
  if (mode == ExpanderMode::exact) {
    if (n > 24) throw InvalidArgument("check_expander: exact mode needs n <= 24");
    out.exhaustive = true;
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    for (Vertex v = 0; v < n; ++v) {
      for (Vertex w : g.neighbors(v)) adj[v] |= 1U << w;
    }
    // Depth-first over subsets in increasing vertex order with a running
    // neighbourhood union.
    struct Frame {
      std::uint32_t set, nbr;
      Vertex next;
    };
    std::vector<Frame> stack{{0U, 0U, 0}};
    while (!stack.empty() && out.holds) {
      Frame f = stack.back();
      stack.pop_back();
      for (Vertex v = f.next; v < n; ++v) {
        const std::uint32_t set = f.set | (1U << v);
        const std::uint32_t nbr = f.nbr | adj[v];
        const auto size = static_cast<std::size_t>(std::popcount(set));
        ++out.sets_checked;
        if (!expands(static_cast<std::size_t>(std::popcount(nbr & ~set)), size, params.c)) {
          out.holds = false;
          for (Vertex u = 0; u < n; ++u) {
            if (set >> u & 1U) out.witness.push_back(u);
          }
          break;
        }
        if (size < m) stack.push_back({set, nbr, v + 1});
      }
    }
    return out;
  }

  if (n == 0) return out;
  Rng rng = Rng::stream(seed, "expander-sample");
  std::vector<std::uint32_t> in_set(static_cast<std::size_t>(n), 0), in_nbr(static_cast<std::size_t>(n), 0);
  std::uint32_t stamp = 0;
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Vertex> set;
  for (std::size_t t = 0; t < samples; ++t) {
    ++stamp;
    set.clear();
    const auto size = static_cast<std::size_t>(1 + rng.below(m));
    if (t % 2 == 0) {
      // Uniform subset of the drawn size (partial Fisher-Yates).
      for (std::size_t i = 0; i < size; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n) - i));
        std::swap(perm[i], perm[j]);
        set.push_back(perm[i]);
        in_set[perm[i]] = stamp;
      }
    } else {
      // Grown along edges from a random start.
      const auto start = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      set.push_back(start);
      in_set[start] = stamp;
      while (set.size() < size) {
        const Vertex from = set[rng.below(set.size())];
        const auto nb = g.neighbors(from);
        Vertex pick = -1;
        if (!nb.empty()) {
          const Vertex w = nb[rng.below(nb.size())];
          if (in_set[w] != stamp) pick = w;
        }
        if (pick == -1) {
          const auto w = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
          if (in_set[w] == stamp) continue;
          pick = w;
        }
        set.push_back(pick);
        in_set[pick] = stamp;
      }
    }
    std::size_t boundary = 0;
    for (Vertex v : set) {
      for (Vertex w : g.neighbors(v)) {
        if (in_set[w] != stamp && in_nbr[w] != stamp) {
          in_nbr[w] = stamp;
          ++boundary;
        }
      }
    }
    ++out.sets_checked;
    if (!expands(boundary, set.size(), params.c)) {
      out.holds = false;
      out.witness = set;
      std::sort(out.witness.begin(), out.witness.end());
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Small exact Hamiltonicity

std::optional<std::vector<Vertex>> hamilton_oracle_small(const Graph& g) {
  const Vertex n = g.vertex_count();
  if (n > 14) throw InvalidArgument("hamilton_oracle_small: n must be at most 14");
  if (n < 3) return std::nullopt;
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) adj[v] |= 1U << w;
  }
  const std::uint32_t full = (1U << n) - 1;
  // ends[mask]: vertices v such that a path from 0 covers exactly mask and ends at v.
  std::vector<std::uint16_t> ends(static_cast<std::size_t>(full) + 1, 0);
  ends[1] = 1;
  for (std::uint32_t mask = 1; mask <= full; mask += 2) {
    const std::uint16_t e = ends[mask];
    if (!e) continue;
    for (Vertex v = 0; v < n; ++v) {
      if (!(e >> v & 1U)) continue;
      std::uint32_t next = adj[v] & ~mask;
      while (next) {
        const int w = std::countr_zero(next);
        next &= next - 1;
        ends[mask | (1U << w)] |= static_cast<std::uint16_t>(1U << w);
      }
    }
  }
  int last = -1;
  for (Vertex v = 1; v < n; ++v) {
    if ((ends[full] >> v & 1U) && (adj[v] & 1U)) {
      last = v;
      break;
    }
  }
  if (last < 0) return std::nullopt;
  std::vector<Vertex> cycle;
  std::uint32_t mask = full;
  int v = last;
  while (v != 0) {
    cycle.push_back(v);
    const std::uint32_t prev_mask = mask & ~(1U << v);
    int u = -1;
    for (int c = 0; c < n; ++c) {
      if ((ends[prev_mask] >> c & 1U) && (adj[c] >> v & 1U)) {
        u = c;
        break;
      }
    }
    mask = prev_mask;
    v = u;
  }
  cycle.push_back(0);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

bool is_hamilton_cycle(const Graph& g, std::span<const Vertex> cycle) {
  const Vertex n = g.vertex_count();
  if (n < 3 || cycle.size() != static_cast<std::size_t>(n)) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Vertex v : cycle) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    if (!g.has_edge(cycle[t], cycle[(t + 1) % cycle.size()])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rotation engine

namespace {

struct ExploreResult {
  bool stopped = false;
  bool exhausted = false;
  std::size_t discoveries = 0;
};

// Pósa rotations of the back end of a path with the front fixed. Positions and
// visit marks use stamps so one engine serves many searches on a graph.
class RotationEngine {
 public:
  explicit RotationEngine(const Graph& g)
      : g_(g),
        pos_(static_cast<std::size_t>(g.vertex_count()), 0),
        pos_stamp_(static_cast<std::size_t>(g.vertex_count()), 0),
        seen_stamp_(static_cast<std::size_t>(g.vertex_count()), 0) {}

  void load(const std::vector<Vertex>& path) {
    ++pstamp_;
    for (std::size_t i = 0; i < path.size(); ++i) {
      pos_[path[i]] = i;
      pos_stamp_[path[i]] = pstamp_;
    }
  }

  [[nodiscard]] bool in_path(Vertex v) const { return pos_stamp_[v] == pstamp_; }
  [[nodiscard]] std::size_t pos(Vertex v) const { return pos_[v]; }

  // visit(path) is called for the starting end and for every newly reached
  // end; returning true stops the search with the path left in that state.
  // Otherwise the path is restored before returning.
  template <class Visit>
  ExploreResult explore(std::vector<Vertex>& path, std::size_t budget, Rng& rng, Visit&& visit) {
    ExploreResult res;
    ++sstamp_;
    const std::size_t len = path.size();
    seen_stamp_[path.back()] = sstamp_;
    if (visit(path)) {
      res.stopped = true;
      return res;
    }
    if (len < 3) return res;
    struct Frame {
      std::size_t undo;  // pivot whose reversal produced this end; npos for the root
      std::size_t it;
      std::size_t offset;
    };
    constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
    std::vector<Frame> stack;
    auto push = [&](std::size_t undo) {
      const auto deg = g_.degree(path.back());
      stack.push_back({undo, 0, deg ? static_cast<std::size_t>(rng.below(deg)) : 0});
    };
    push(kRoot);
    while (!stack.empty()) {
      Frame& f = stack.back();
      const Vertex x = path.back();
      const auto nb = g_.neighbors(x);
      bool descended = false;
      while (f.it < nb.size()) {
        const Vertex y = nb[(f.offset + f.it) % nb.size()];
        ++f.it;
        if (!in_path(y)) continue;
        const std::size_t i = pos_[y];
        if (i + 2 >= len) continue;  // y is x itself or its predecessor
        const Vertex fresh = path[i + 1];
        if (seen_stamp_[fresh] == sstamp_) continue;
        if (res.discoveries >= budget) {
          res.exhausted = true;
          unwind(path, stack);
          return res;
        }
        reverse_suffix(path, i + 1);
        seen_stamp_[fresh] = sstamp_;
        ++res.discoveries;
        if (visit(path)) {
          res.stopped = true;
          return res;
        }
        push(i);
        descended = true;
        break;
      }
      if (descended) continue;
      const std::size_t undo = stack.back().undo;
      stack.pop_back();
      if (undo != kRoot) reverse_suffix(path, undo + 1);
    }
    return res;
  }

 private:
  template <class Stack>
  void unwind(std::vector<Vertex>& path, Stack& stack) {
    while (!stack.empty()) {
      const std::size_t undo = stack.back().undo;
      stack.pop_back();
      if (undo != static_cast<std::size_t>(-1)) reverse_suffix(path, undo + 1);
    }
  }

  void reverse_suffix(std::vector<Vertex>& path, std::size_t from) {
    std::reverse(path.begin() + static_cast<std::ptrdiff_t>(from), path.end());
    for (std::size_t t = from; t < path.size(); ++t) pos_[path[t]] = t;
  }

  const Graph& g_;
  std::vector<std::size_t> pos_;
  std::vector<std::uint32_t> pos_stamp_;
  std::vector<std::uint32_t> seen_stamp_;
  std::uint32_t pstamp_ = 0;
  std::uint32_t sstamp_ = 0;
};

void require_path(const Graph& g, std::span<const Vertex> path) {
  if (path.empty()) throw InvalidArgument("path must be nonempty");
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  for (std::size_t t = 0; t < path.size(); ++t) {
    const Vertex v = path[t];
    if (v < 0 || v >= g.vertex_count()) throw InvalidArgument("path vertex out of range");
    if (seen[v]) throw InvalidArgument("path repeats a vertex");
    seen[v] = 1;
    if (t > 0 && !g.has_edge(path[t - 1], v)) throw InvalidArgument("path uses a non-edge");
  }
}

bool has_pair(std::span<const Edge> sorted, Vertex a, Vertex b) {
  if (sorted.empty() || a == b) return false;
  return std::binary_search(sorted.begin(), sorted.end(), Edge(a, b));
}

TrichotomyOutcome run_trichotomy(const Graph& g, std::span<const Vertex> path_in,
                                 const PosaOptions& options) {
  TrichotomyOutcome out;
  const Vertex n = g.vertex_count();
  const std::size_t budget = options.budget ? options.budget : 4 * static_cast<std::size_t>(n);
  RotationEngine engine(g);
  Rng rng = Rng::stream(options.seed, "posa");
  const auto* mask = options.outside_mask;
  auto outside_neighbor = [&](Vertex x) -> Vertex {
    for (Vertex w : g.neighbors(x)) {
      if (!engine.in_path(w) && (mask == nullptr || (*mask)[w])) return w;
    }
    return -1;
  };

  std::vector<Vertex> work(path_in.begin(), path_in.end());
  const std::size_t len = work.size();
  engine.load(work);
  const Vertex front = work.front();
  bool closing = false;
  std::vector<std::vector<Vertex>> fixed_ends;
  bool done = false;

  auto level1 = [&](std::vector<Vertex>& p) {
    const Vertex x = p.back();
    if (const Vertex w = outside_neighbor(x); w != -1) {
      out.kind = TrichotomyKind::ExtendablePath;
      out.path = p;
      out.outside = w;
      return done = true;
    }
    if (len >= 3 && x != front) {
      if (g.has_edge(x, front)) {
        if (!closing) {
          closing = true;
          out.cycle = p;
        }
      } else {
        if (options.collect_boosters) out.boosters.emplace_back(front, x);
        if (has_pair(options.probes, front, x)) {
          out.probe_hit = Edge(front, x);
          out.probe_path = p;
          return done = true;
        }
      }
    }
    if (fixed_ends.size() < options.max_fixed_ends) fixed_ends.push_back(p);
    return false;
  };
  auto r1 = engine.explore(work, budget, rng, level1);
  out.discoveries += r1.discoveries;
  out.budget_exhausted |= r1.exhausted;
  if (done) {
    if (out.kind != TrichotomyKind::ExtendablePath) out.kind = TrichotomyKind::BoosterSet;
  } else if (closing) {
    out.kind = TrichotomyKind::HamiltonianSpan;
  } else if (len >= 3) {
    for (auto& q : fixed_ends) {
      std::reverse(q.begin(), q.end());
      engine.load(q);
      const Vertex fixed = q.front();
      auto level2 = [&](std::vector<Vertex>& p) {
        const Vertex x = p.back();
        if (const Vertex w = outside_neighbor(x); w != -1) {
          out.kind = TrichotomyKind::ExtendablePath;
          out.path = p;
          out.outside = w;
          return done = true;
        }
        if (x == fixed) return false;
        if (g.has_edge(x, fixed)) {
          out.kind = TrichotomyKind::HamiltonianSpan;
          out.cycle = p;
          return done = true;
        }
        if (options.collect_boosters) out.boosters.emplace_back(fixed, x);
        if (has_pair(options.probes, fixed, x)) {
          out.probe_hit = Edge(fixed, x);
          out.probe_path = p;
          out.kind = TrichotomyKind::BoosterSet;
          return done = true;
        }
        return false;
      };
      auto r2 = engine.explore(q, budget, rng, level2);
      out.discoveries += r2.discoveries;
      out.budget_exhausted |= r2.exhausted;
      if (done) break;
    }
  }
  if (!done && !closing) out.kind = TrichotomyKind::BoosterSet;
  if (out.kind != TrichotomyKind::BoosterSet) out.boosters.clear();
  std::sort(out.boosters.begin(), out.boosters.end());
  out.boosters.erase(std::unique(out.boosters.begin(), out.boosters.end()), out.boosters.end());
  return out;
}

}  // namespace

TrichotomyOutcome posa_trichotomy(const Graph& g, std::span<const Vertex> path,
                                  const PosaOptions& options) {
  require_path(g, path);
  return run_trichotomy(g, path, options);
}

std::optional<std::vector<Vertex>> realize_booster(const Graph& g, std::span<const Vertex> path,
                                                   const Edge& pair, const PosaOptions& options) {
  require_path(g, path);
  PosaOptions replay = options;
  const Edge probe[1] = {pair};
  replay.probes = probe;
  replay.collect_boosters = false;
  auto out = run_trichotomy(g, path, replay);
  if (!out.probe_hit || *out.probe_hit != pair) return std::nullopt;
  return out.probe_path;
}

// ---------------------------------------------------------------------------
// Path order and extremal normalization

PathOrderKey PathOrderKey::of(const PathSystem& ps) {
  PathOrderKey key;
  key.s = ps.paths.size();
  for (const auto& p : ps.paths) key.lengths.push_back(p.size());
  std::sort(key.lengths.begin(), key.lengths.end(), std::greater<>());
  return key;
}

std::weak_ordering compare_path_systems(const PathOrderKey& a, const PathOrderKey& b) {
  if (a.s != b.s) return a.s < b.s ? std::weak_ordering::less : std::weak_ordering::greater;
  // Lexicographically larger length vectors come first.
  const auto c = std::lexicographical_compare_three_way(a.lengths.begin(), a.lengths.end(),
                                                        b.lengths.begin(), b.lengths.end());
  if (c == std::strong_ordering::greater) return std::weak_ordering::less;
  if (c == std::strong_ordering::less) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

namespace {

// Attaches part of q at position j after the back of p (the back of p is
// adjacent to q[j]). Whole q when q[j] is an end; otherwise the longer side.
// Returns the leftover of q (possibly empty).
std::vector<Vertex> splice(std::vector<Vertex>& p, const std::vector<Vertex>& q, std::size_t j) {
  const std::size_t len = q.size();
  if (j == 0) {
    p.insert(p.end(), q.begin(), q.end());
    return {};
  }
  if (j + 1 == len) {
    p.insert(p.end(), q.rbegin(), q.rend());
    return {};
  }
  if (j + 1 >= len - j) {
    // q[j], q[j-1], ..., q[0]; leftover q[j+1..].
    for (std::size_t t = j + 1; t-- > 0;) p.push_back(q[t]);
    return {q.begin() + static_cast<std::ptrdiff_t>(j + 1), q.end()};
  }
  p.insert(p.end(), q.begin() + static_cast<std::ptrdiff_t>(j), q.end());
  return {q.begin(), q.begin() + static_cast<std::ptrdiff_t>(j)};
}

class Normalizer {
 public:
  Normalizer(const Graph& g, const PathSystem& ps, const NormalizeOptions& opts)
      : g_(g),
        opts_(opts),
        engine_(g),
        path_of_(static_cast<std::size_t>(g.vertex_count()), -1),
        rng_(Rng::stream(opts.seed, "normalize")) {
    for (const auto& p : ps.paths) add(p);
  }

  PathSystem run(NormalizeStats* stats) {
    const auto n = static_cast<std::size_t>(g_.vertex_count());
    const std::size_t budget = opts_.rotation_budget ? opts_.rotation_budget : 4 * n;
    const std::size_t max_moves = opts_.max_moves ? opts_.max_moves : 4 * n + 4;
    NormalizeStats local;
    bool progress = true;
    while (progress) {
      progress = false;
      sort_order();
      for (std::size_t r = 0; r < order_.size(); ++r) {
        const int id = order_[r];
        if (stuck_[id]) continue;
        if (local.moves >= max_moves) {
          local.budget_exhausted = true;
          break;
        }
        if (try_extend(id, budget, local)) {
          ++local.moves;
          progress = true;
          break;
        }
        stuck_[id] = 1;
      }
    }
    if (stats) *stats = local;
    sort_order();
    PathSystem out;
    out.n = g_.vertex_count();
    for (int id : order_) out.paths.push_back(paths_[id]);
    return out;
  }

 private:
  void add(std::vector<Vertex> p) {
    const int id = static_cast<int>(paths_.size());
    for (Vertex v : p) path_of_[v] = id;
    paths_.push_back(std::move(p));
    alive_.push_back(1);
    stuck_.push_back(0);
  }

  void sort_order() {
    order_.clear();
    for (int id = 0; id < static_cast<int>(paths_.size()); ++id) {
      if (alive_[id]) order_.push_back(id);
    }
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return paths_[a].size() > paths_[b].size();
    });
    rank_.assign(paths_.size(), -1);
    for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = static_cast<int>(r);
  }

  bool try_extend(int id, std::size_t budget, NormalizeStats& stats) {
    const int my_rank = rank_[id];
    auto later = [&](Vertex w) { return rank_[path_of_[w]] > my_rank; };
    Vertex hit = -1;
    auto visit = [&](std::vector<Vertex>& p) {
      for (Vertex w : g_.neighbors(p.back())) {
        if (later(w)) {
          hit = w;
          return true;
        }
      }
      return false;
    };
    std::vector<Vertex>& p = paths_[id];
    const std::vector<Vertex> original = p;
    for (int side = 0; side < 2 && hit == -1; ++side) {
      if (side == 1) std::reverse(p.begin(), p.end());
      engine_.load(p);
      ++stats.explorations;
      auto res = engine_.explore(p, budget, rng_, visit);
      stats.budget_exhausted |= res.exhausted;
    }
    if (hit == -1) {
      p = original;
      return false;
    }
    const int qid = path_of_[hit];
    const std::vector<Vertex> q = paths_[qid];
    const auto j = static_cast<std::size_t>(std::find(q.begin(), q.end(), hit) - q.begin());
    const std::size_t old_len = q.size();
    auto rest = splice(p, q, j);
    for (Vertex v : p) path_of_[v] = id;
    stuck_[id] = 0;
    const int old_rank = rank_[qid];
    if (rest.empty()) {
      alive_[qid] = 0;
      paths_[qid].clear();
    } else {
      paths_[qid] = std::move(rest);
      stuck_[qid] = 0;
    }
    // Paths that q drops behind see its vertices as later now.
    const std::size_t new_len = paths_[qid].size();
    for (std::size_t r = static_cast<std::size_t>(old_rank) + 1; r < order_.size(); ++r) {
      const int other = order_[r];
      if (paths_[other].size() < old_len && paths_[other].size() >= new_len) stuck_[other] = 0;
    }
    return true;
  }

  const Graph& g_;
  NormalizeOptions opts_;
  RotationEngine engine_;
  std::vector<int> path_of_;
  std::vector<std::vector<Vertex>> paths_;
  std::vector<char> alive_, stuck_;
  std::vector<int> order_, rank_;
  Rng rng_;
};

}  // namespace

PathSystem normalize_extremal(const Graph& g, const PathSystem& ps, const NormalizeOptions& options,
                              NormalizeStats* stats) {
  if (ps.n != g.vertex_count()) throw InvalidArgument("normalize_extremal: universe mismatch");
  validate_path_system(ps, &g);
  return Normalizer(g, ps, options).run(stats);
}

// ---------------------------------------------------------------------------
// Merging round

namespace {

// Cycle rotated so that it starts at cycle[at]: a Hamilton path of the span
// beginning at that vertex.
std::vector<Vertex> open_from(const std::vector<Vertex>& cycle, std::size_t at) {
  std::vector<Vertex> out;
  out.reserve(cycle.size());
  for (std::size_t t = 0; t < cycle.size(); ++t) out.push_back(cycle[(at + t) % cycle.size()]);
  return out;
}

// Hamilton path of the span ending at cycle[at].
std::vector<Vertex> open_to(const std::vector<Vertex>& cycle, std::size_t at) {
  return open_from(cycle, (at + 1) % cycle.size());
}

void verify_cycle(const Graph& combined, const Graph& forbidden, const std::vector<Vertex>& cycle) {
  if (!is_hamilton_cycle(combined, cycle))
    throw ContractViolation("merge_round produced a cycle that is not Hamiltonian in base u layer");
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    if (forbidden.has_edge(cycle[t], cycle[(t + 1) % cycle.size()]))
      throw ContractViolation("merge_round produced a cycle through a forbidden edge");
  }
}

std::vector<Edge> inside(std::span<const Edge> edges, const std::vector<char>& member) {
  std::vector<Edge> out;
  for (const Edge& e : edges) {
    if (member[e.u] && member[e.v]) out.push_back(e);
  }
  return out;
}

}  // namespace

MergeResult merge_round(MergeState& state, const Graph& base, std::span<const Edge> layer,
                        const ExpanderParams& params, const MergeOptions& options) {
  const Vertex n = base.vertex_count();
  const auto nn = static_cast<std::size_t>(n);
  if (state.paths.n != n || state.forbidden.vertex_count() != n)
    throw InvalidArgument("merge_round: universe mismatch");
  const auto cap = std::max<std::int64_t>(0, state.min_degree - 2);
  if (static_cast<std::int64_t>(state.forbidden.max_degree()) > cap)
    throw ContractViolation("Delta(Gamma) = " + std::to_string(state.forbidden.max_degree()) +
                            " exceeds delta(G) - 2 = " + std::to_string(cap));
  MergeResult res;
  res.paths_before = state.paths.size();

  std::vector<Edge> flayer;
  for (const Edge& e : layer) {
    if (!state.in_s.empty() && (state.in_s[e.u] || state.in_s[e.v])) continue;
    if (state.forbidden.has_edge(e.u, e.v) || base.has_edge(e.u, e.v)) continue;
    flayer.push_back(e);
  }
  std::sort(flayer.begin(), flayer.end());
  flayer.erase(std::unique(flayer.begin(), flayer.end()), flayer.end());
  res.layer_used = flayer;
  const Graph combined = flayer.empty() ? base : graph_union(base, Graph::from_edges(n, flayer));

  NormalizeOptions nopt = options.normalize;
  nopt.seed = derive_seed(options.normalize.seed, "round", static_cast<std::uint64_t>(state.slot),
                          static_cast<std::uint64_t>(state.step));
  PathSystem ps = normalize_extremal(base, state.paths, nopt);
  auto finish = [&](MergeStatus status, std::string why) {
    res.status = status;
    res.diagnostic = std::move(why);
    res.paths_after = state.paths.size();
    return res;
  };
  if (ps.size() < res.paths_before) {
    state.paths = std::move(ps);
    return finish(MergeStatus::Advanced, "normalized");
  }
  state.paths = ps;

  PosaOptions popt = options.posa;
  popt.seed = derive_seed(options.posa.seed, "p1", static_cast<std::uint64_t>(state.slot),
                          static_cast<std::uint64_t>(state.step));
  popt.outside_mask = nullptr;
  popt.collect_boosters = true;
  std::vector<char> in_v1(nn, 0);
  for (Vertex v : ps.paths[0]) in_v1[v] = 1;
  const auto probes1 = inside(flayer, in_v1);
  popt.probes = probes1;
  auto t1 = posa_trichotomy(base, ps.paths[0], popt);
  res.boosters += t1.boosters.size();

  std::vector<int> path_of(nn, -1);
  for (std::size_t r = 0; r < ps.paths.size(); ++r) {
    for (Vertex v : ps.paths[r]) path_of[v] = static_cast<int>(r);
  }
  // Replace paths by index with a new set of paths.
  auto rebuild = [&](std::vector<std::size_t> drop, std::vector<std::vector<Vertex>> add) {
    std::sort(drop.begin(), drop.end());
    PathSystem next;
    next.n = n;
    for (auto& p : add) {
      if (!p.empty()) next.paths.push_back(std::move(p));
    }
    for (std::size_t r = 0; r < ps.paths.size(); ++r) {
      if (!std::binary_search(drop.begin(), drop.end(), r)) next.paths.push_back(ps.paths[r]);
    }
    validate_path_system(next, &combined);
    state.paths = std::move(next);
  };
  auto splice_at = [&](std::vector<Vertex> head, Vertex w, std::size_t self) {
    const auto r = static_cast<std::size_t>(path_of[w]);
    const auto& q = ps.paths[r];
    const auto j = static_cast<std::size_t>(std::find(q.begin(), q.end(), w) - q.begin());
    auto rest = splice(head, q, j);
    rebuild({self, r}, {std::move(head), std::move(rest)});
  };

  if (t1.kind == TrichotomyKind::ExtendablePath) {
    splice_at(std::move(t1.path), t1.outside, 0);
    return finish(MergeStatus::Advanced, "p1_extended");
  }
  std::vector<Vertex> c1;
  if (t1.kind == TrichotomyKind::HamiltonianSpan) {
    c1 = std::move(t1.cycle);
  } else if (t1.probe_hit) {
    c1 = std::move(t1.probe_path);
  } else {
    return finish(MergeStatus::Retry, "no_cycle_on_v1");
  }
  if (static_cast<std::int64_t>(c1.size()) < params.m) res.small_span = c1.size();

  if (ps.size() == 1) {
    if (c1.size() != nn) throw ContractViolation("merge_round: single path does not span V");
    verify_cycle(combined, state.forbidden, c1);
    res.cycle = std::move(c1);
    return finish(MergeStatus::Cycle, "hamilton_cycle");
  }

  std::vector<std::size_t> cpos(nn, 0);
  for (std::size_t t = 0; t < c1.size(); ++t) cpos[c1[t]] = t;

  // P2 against V1 in the combined graph.
  PosaOptions popt2 = options.posa;
  popt2.seed = derive_seed(options.posa.seed, "p2", static_cast<std::uint64_t>(state.slot),
                           static_cast<std::uint64_t>(state.step));
  popt2.outside_mask = &in_v1;
  popt2.collect_boosters = true;
  std::vector<char> in_v2(nn, 0);
  for (Vertex v : ps.paths[1]) in_v2[v] = 1;
  const auto probes2 = inside(flayer, in_v2);
  popt2.probes = probes2;
  auto t2 = posa_trichotomy(combined, ps.paths[1], popt2);
  res.boosters += t2.boosters.size();
  if (t2.kind == TrichotomyKind::ExtendablePath) {
    std::vector<Vertex> merged = std::move(t2.path);
    const auto tail = open_from(c1, cpos[t2.outside]);
    merged.insert(merged.end(), tail.begin(), tail.end());
    rebuild({0, 1}, {std::move(merged)});
    return finish(MergeStatus::Advanced, "p2_into_c1");
  }
  std::vector<Vertex> c2;
  if (t2.kind == TrichotomyKind::HamiltonianSpan) {
    c2 = std::move(t2.cycle);
  } else if (t2.probe_hit) {
    c2 = std::move(t2.probe_path);
  }
  if (!c2.empty()) {
    std::vector<std::size_t> c2pos(nn, 0);
    for (std::size_t t = 0; t < c2.size(); ++t) c2pos[c2[t]] = t;
    for (Vertex b : c2) {
      for (Vertex a : combined.neighbors(b)) {
        if (!in_v1[a]) continue;
        std::vector<Vertex> merged = open_to(c1, cpos[a]);
        const auto tail = open_from(c2, c2pos[b]);
        merged.insert(merged.end(), tail.begin(), tail.end());
        rebuild({0, 1}, {std::move(merged)});
        return finish(MergeStatus::Advanced, "bridged");
      }
    }
  }
  // Any edge leaving V1 extends the opened cycle into a later path.
  for (std::size_t t = 0; t < c1.size(); ++t) {
    for (Vertex w : combined.neighbors(c1[t])) {
      if (in_v1[w]) continue;
      splice_at(open_to(c1, t), w, 0);
      return finish(MergeStatus::Advanced, "c1_extended");
    }
  }
  return finish(MergeStatus::Retry, c2.empty() ? "no_cycle_on_v2" : "no_bridge");
}

}  // namespace hampack
