#include "hampack/regular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flow.hpp"

namespace hampack {

DegreeWindow DegreeWindow::around(std::int64_t n, double p, double c) {
  const double np = static_cast<double>(n) * p;
  const double logn = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
  return {np, c * std::sqrt(std::max(0.0, np * logn)), c};
}

DegreeWindow DegreeWindow::at_least(std::int64_t k) {
  return {static_cast<double>(k) + 1e15, 1e15, 0.0};
}

std::int64_t DegreeWindow::lo() const {
  return static_cast<std::int64_t>(std::ceil(center - halfwidth - 1e-9));
}

std::int64_t DegreeWindow::hi() const {
  const double top = center + halfwidth;
  if (top > 1e14) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(std::floor(top + 1e-9));
}

std::size_t default_z_cap(std::int64_t n, double c) {
  if (n <= 0) return 0;
  const double z = std::pow(static_cast<double>(n), 1.0 - c * c / 66.0) / 2.0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(z));
}

namespace {

// Survivors of one side with O(1) uniform pick and removal.
class ActiveSet {
 public:
  explicit ActiveSet(std::size_t n) : items_(n), pos_(n) {
    std::iota(items_.begin(), items_.end(), 0);
    std::iota(pos_.begin(), pos_.end(), 0);
  }
  [[nodiscard]] bool contains(std::size_t v) const { return pos_[v] != kGone; }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  std::size_t pick(Rng& rng) const { return items_[rng.below(items_.size())]; }
  void remove(std::size_t v) {
    const std::size_t at = pos_[v];
    const std::size_t last = items_.back();
    items_[at] = last;
    pos_[last] = at;
    items_.pop_back();
    pos_[v] = kGone;
  }
  [[nodiscard]] std::vector<std::size_t> sorted() const {
    std::vector<std::size_t> out = items_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t kGone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> items_;
  std::vector<std::size_t> pos_;
};

}  // namespace

TrimResult trim_balanced(const BipartitePair& bp, const DegreeWindow& window, std::size_t z_cap,
                         Seed seed, PartnerRule rule) {
  if (bp.left_size() != bp.right_size())
    throw InvalidArgument("trim_balanced: sides must have equal size");
  const std::size_t n = bp.left_size();
  Rng rng = Rng::stream(seed, "trim");
  TrimResult out;
  out.z_cap = z_cap;
  const std::int64_t lo = window.lo();
  const std::int64_t hi = window.hi();

  // side 0 = left, 1 = right; degree counts only surviving neighbours.
  ActiveSet active[2] = {ActiveSet(n), ActiveSet(n)};
  std::vector<std::int64_t> deg[2];
  deg[0].resize(n);
  deg[1].resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    deg[0][i] = static_cast<std::int64_t>(bp.left_degree(i));
    deg[1][i] = static_cast<std::int64_t>(bp.right_degree(i));
  }
  auto nbrs = [&](int side, std::size_t v) {
    return side == 0 ? bp.left_neighbors(v) : bp.right_neighbors(v);
  };
  std::vector<std::pair<int, std::size_t>> low, high;
  for (int side = 0; side < 2; ++side) {
    for (std::size_t v = 0; v < n; ++v) {
      if (deg[side][v] < lo) low.emplace_back(side, v);
      if (deg[side][v] > hi) high.emplace_back(side, v);
    }
  }
  auto evict = [&](int side, std::size_t v) {
    active[side].remove(v);
    for (auto w : nbrs(side, v)) {
      const auto u = static_cast<std::size_t>(w);
      if (!active[1 - side].contains(u)) continue;
      if (--deg[1 - side][u] == lo - 1) low.emplace_back(1 - side, u);
    }
  };
  auto global = [&](int side, std::size_t v) { return side == 0 ? bp.left()[v] : bp.right()[v]; };
  auto low_partner = [&](int side) -> std::size_t {
    for (std::size_t t = low.size(); t-- > 0;) {
      auto [s, u] = low[t];
      if (s == side && active[s].contains(u) && deg[s][u] < lo) return u;
    }
    return active[side].pick(rng);
  };
  auto evict_pair = [&](int side, std::size_t v, auto& cls) {
    evict(side, v);
    const std::size_t partner =
        rule == PartnerRule::prefer_low ? low_partner(1 - side) : active[1 - side].pick(rng);
    evict(1 - side, partner);
    if (side == 0)
      cls.emplace_back(global(0, v), global(1, partner));
    else
      cls.emplace_back(global(0, partner), global(1, v));
  };

  std::size_t high_at = 0;
  for (;;) {
    if (out.removed_minus.size() >= z_cap || out.removed_plus.size() >= z_cap) {
      out.aborted = true;
      break;
    }
    if (!low.empty()) {
      auto [side, v] = low.back();
      low.pop_back();
      if (!active[side].contains(v) || deg[side][v] >= lo) continue;
      if (active[1 - side].size() == 0) break;
      evict_pair(side, v, out.removed_minus);
      continue;
    }
    // Degrees only fall, so the initial high list covers every future case.
    while (high_at < high.size()) {
      auto [side, v] = high[high_at];
      if (active[side].contains(v) && deg[side][v] > hi) break;
      ++high_at;
    }
    if (high_at == high.size()) break;
    auto [side, v] = high[high_at++];
    if (active[1 - side].size() == 0) break;
    evict_pair(side, v, out.removed_plus);
  }
  const auto keep_left = active[0].sorted();
  const auto keep_right = active[1].sorted();
  out.h = bp.restrict(keep_left, keep_right);
  return out;
}

std::int64_t bal_deficiency(const BipartitePair& bp, std::int64_t k,
                            std::span<const std::size_t> x, std::span<const std::size_t> y) {
  std::vector<char> in_y(bp.right_size(), 0);
  for (auto j : y) {
    if (j >= bp.right_size()) throw InvalidArgument("bal_deficiency: Y index out of range");
    in_y[j] = 1;
  }
  std::int64_t exy = 0;
  for (auto i : x) {
    if (i >= bp.left_size()) throw InvalidArgument("bal_deficiency: X index out of range");
    for (auto j : bp.left_neighbors(i)) exy += in_y[j];
  }
  const auto n = static_cast<std::int64_t>(bp.left_size());
  return exy - k * (static_cast<std::int64_t>(x.size()) + static_cast<std::int64_t>(y.size()) - n);
}

KFactorResult extract_k_factor(const BipartitePair& bp, std::size_t k) {
  if (bp.left_size() != bp.right_size())
    throw InvalidArgument("extract_k_factor: sides must have equal size");
  const std::size_t n = bp.left_size();
  if (k > n) throw InvalidArgument("extract_k_factor: k exceeds the side size");
  KFactorResult out;
  out.required = static_cast<std::int64_t>(k * n);
  if (k == 0) {
    out.factor = RegularSubgraph{BipartitePair(bp.left(), bp.right(), std::span<const Edge>{}), 0};
    return out;
  }
  const int s = 0, t = 1;
  auto left_node = [](std::size_t i) { return 2 + static_cast<int>(i); };
  auto right_node = [n](std::size_t j) { return 2 + static_cast<int>(n + j); };
  detail::MaxFlow flow(static_cast<int>(2 + 2 * n));
  for (std::size_t i = 0; i < n; ++i) flow.add_edge(s, left_node(i), static_cast<std::int64_t>(k));
  for (std::size_t j = 0; j < n; ++j) flow.add_edge(right_node(j), t, static_cast<std::int64_t>(k));
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> arcs;
  arcs.reserve(bp.edge_count());
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : bp.left_neighbors(i))
      arcs.push_back({flow.add_edge(left_node(i), right_node(j), 1), {i, static_cast<std::size_t>(j)}});
  }
  out.flow = flow.run(s, t);
  if (out.flow != out.required) return out;
  std::vector<Edge> chosen;
  chosen.reserve(k * n);
  for (const auto& [id, ij] : arcs) {
    if (flow.flow_on(id) > 0) chosen.emplace_back(bp.left()[ij.first], bp.right()[ij.second]);
  }
  out.factor = RegularSubgraph{BipartitePair(bp.left(), bp.right(), chosen), k};
  return out;
}

bool is_k_factor_of(const BipartitePair& g, const BipartitePair& host, std::size_t k) {
  for (std::size_t i = 0; i < g.left_size(); ++i) {
    if (g.left_degree(i) != k) return false;
  }
  for (std::size_t j = 0; j < g.right_size(); ++j) {
    if (g.right_degree(j) != k) return false;
  }
  const auto host_edges = host.cross_edges();
  for (const Edge& e : g.cross_edges()) {
    if (!std::binary_search(host_edges.begin(), host_edges.end(), e)) return false;
  }
  return true;
}

int bisection_depth(std::int64_t n, double p, double c) {
  const double nn = static_cast<double>(n);
  const double target = (c / 4.0) * std::sqrt(nn * p * std::log(nn));
  const int cap = std::max(1, static_cast<int>(std::floor(std::log2(nn))));
  for (int l = 1; l < cap; ++l) {
    if (p * std::ldexp(nn, -l) < target) return l;
  }
  return cap;
}

std::int64_t level_k(std::int64_t n, double p, double c, int i) {
  const double ni = std::ldexp(static_cast<double>(n), -i);
  const double v = p * ni - (c / 7.0) * std::sqrt(p * ni * std::log(static_cast<double>(n)));
  return v > 0.0 ? static_cast<std::int64_t>(std::floor(v)) : 0;
}

std::int64_t level_m(std::int64_t n, double c, int i) {
  const double ni = std::ldexp(static_cast<double>(n), -i);
  const double v = ni - std::pow(ni, 1.0 - c * c / 5880.0);
  return v > 0.0 ? static_cast<std::int64_t>(std::floor(v)) : 0;
}

BisectionSchedule bisection_schedule(Vertex n, double p, double c, Seed seed) {
  if (n < 2) throw InvalidArgument("bisection_schedule: n must be at least 2");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("bisection_schedule: p must lie in (0,1]");
  BisectionSchedule sch;
  sch.c = c;
  sch.p = p;
  const double nn = static_cast<double>(n);
  const double np = nn * p;
  sch.k_total = 0.5 * (np - c * std::sqrt(np * std::log(nn)));
  sch.ell = bisection_depth(n, p, c);

  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = Rng::stream(seed, "bisection");
  rng.shuffle(std::span<Vertex>(perm));

  // Level 0 is the whole vertex set as a single part.
  std::vector<std::vector<Vertex>> prev = {{}, perm};
  for (int i = 1; i <= sch.ell; ++i) {
    BisectionLevel lvl;
    lvl.i = i;
    lvl.k_i = level_k(n, p, c, i);
    lvl.m_i = level_m(n, c, i);
    const auto size = static_cast<std::size_t>(n >> i);
    lvl.parts.emplace_back(prev[0]);
    for (std::size_t j = 1; j < prev.size(); ++j) {
      const auto& parent = prev[j];
      lvl.parts.emplace_back(parent.begin(), parent.begin() + static_cast<std::ptrdiff_t>(size));
      lvl.parts.emplace_back(parent.begin() + static_cast<std::ptrdiff_t>(size),
                             parent.begin() + static_cast<std::ptrdiff_t>(2 * size));
      lvl.parts[0].insert(lvl.parts[0].end(), parent.begin() + static_cast<std::ptrdiff_t>(2 * size),
                          parent.end());
    }
    std::sort(lvl.parts[0].begin(), lvl.parts[0].end());
    prev = lvl.parts;
    sch.levels.push_back(std::move(lvl));
  }
  return sch;
}

namespace {

// Largest k' in [0, k_hi] with a k'-factor; monotone for bipartite graphs.
KFactorResult largest_factor(const BipartitePair& bp, std::size_t k_hi) {
  std::size_t lo = 0, hi = std::min(k_hi, bp.left_size());
  KFactorResult best = extract_k_factor(bp, 0);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    auto res = extract_k_factor(bp, mid);
    if (res.factor) {
      lo = mid;
      best = std::move(res);
    } else {
      hi = mid - 1;
    }
  }
  return best;
}

// A maximum matching of bp as a 1-regular pair on the matched vertices.
std::optional<RegularSubgraph> max_matching_factor(const BipartitePair& bp) {
  const std::size_t nl = bp.left_size(), nr = bp.right_size();
  const int s = 0, t = 1;
  detail::MaxFlow flow(static_cast<int>(2 + nl + nr));
  for (std::size_t i = 0; i < nl; ++i) flow.add_edge(s, 2 + static_cast<int>(i), 1);
  for (std::size_t j = 0; j < nr; ++j) flow.add_edge(2 + static_cast<int>(nl + j), t, 1);
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> arcs;
  for (std::size_t i = 0; i < nl; ++i) {
    for (auto j : bp.left_neighbors(i))
      arcs.push_back({flow.add_edge(2 + static_cast<int>(i), 2 + static_cast<int>(nl) + j, 1),
                      {i, static_cast<std::size_t>(j)}});
  }
  if (flow.run(s, t) == 0) return std::nullopt;
  std::vector<Vertex> left, right;
  std::vector<Edge> chosen;
  for (const auto& [id, ij] : arcs) {
    if (flow.flow_on(id) == 0) continue;
    left.push_back(bp.left()[ij.first]);
    right.push_back(bp.right()[ij.second]);
    chosen.emplace_back(left.back(), right.back());
  }
  return RegularSubgraph{BipartitePair(std::move(left), std::move(right), chosen), 1};
}

}  // namespace

PairFactor regular_for_pair(const Graph& g, std::span<const Vertex> left,
                            std::span<const Vertex> right, std::int64_t k, double p,
                            double c_trim, Seed seed, int level, int pair,
                            bool allow_reduced) {
  PairFactor out;
  if (k <= 0 || left.empty()) return out;
  const BipartitePair bp = BipartitePair::induced(g, left, right);
  const auto ni = static_cast<std::int64_t>(left.size());
  const DegreeWindow window = DegreeWindow::around(ni, p, c_trim);
  auto shortfall = [&](std::string detail, std::int64_t got) {
    out.shortfalls.push_back({"factors", level, pair, std::move(detail), k, got});
  };

  BipartitePair host;
  bool trimmed = false;
  if (!window.empty() && window.lo() >= k) {
    auto tr = trim_balanced(bp, window, default_z_cap(ni, c_trim), derive_seed(seed, "window"));
    if (!tr.aborted) {
      host = std::move(tr.h);
      trimmed = true;
    }
  }
  if (!trimmed) {
    out.trim_aborted = true;
    auto tr = trim_balanced(bp, DegreeWindow::at_least(k), left.size(), derive_seed(seed, "core"),
                            PartnerRule::prefer_low);
    host = std::move(tr.h);
  }
  if (host.left_size() < static_cast<std::size_t>(k)) {
    if (!allow_reduced) {
      shortfall("empty_core", 0);
      return out;
    }
    // Largest k' < k whose core is nonempty and carries a k'-factor.
    for (std::int64_t kk = k - 1; kk >= 1; --kk) {
      auto tr = trim_balanced(bp, DegreeWindow::at_least(kk), left.size(),
                              derive_seed(seed, "core", static_cast<std::uint64_t>(kk)),
                              PartnerRule::prefer_low);
      if (tr.h.left_size() < static_cast<std::size_t>(kk)) continue;
      auto res = extract_k_factor(tr.h, static_cast<std::size_t>(kk));
      if (!res.factor) continue;
      shortfall("reduced_k", kk);
      out.factor = std::move(res.factor);
      return out;
    }
    if (auto mm = max_matching_factor(bp)) {
      shortfall("max_matching", 1);
      out.factor = std::move(mm);
      return out;
    }
    shortfall("empty_core", 0);
    return out;
  }
  auto res = extract_k_factor(host, static_cast<std::size_t>(k));
  if (res.factor) {
    out.factor = std::move(res.factor);
    return out;
  }
  if (!allow_reduced) {
    shortfall("infeasible_k", 0);
    return out;
  }
  auto best = largest_factor(host, static_cast<std::size_t>(k - 1));
  if (best.factor && best.factor->k > 0) {
    shortfall("reduced_k", static_cast<std::int64_t>(best.factor->k));
    out.factor = std::move(best.factor);
  } else if (auto mm = max_matching_factor(bp)) {
    shortfall("max_matching", 1);
    out.factor = std::move(mm);
  } else {
    shortfall("reduced_k", 0);
  }
  return out;
}

LevelRegulars build_level_regulars(const Graph& g, const BisectionSchedule& schedule, int i,
                                   Seed seed, bool allow_reduced) {
  if (i < 1 || i > schedule.ell) throw InvalidArgument("build_level_regulars: level out of range");
  const BisectionLevel& lvl = schedule.level(i);
  LevelRegulars out;
  const double c_trim = 3.0 * schedule.c / 28.0;
  const int pairs = static_cast<int>((lvl.parts.size() - 1) / 2);
  for (int j = 1; j <= pairs; ++j) {
    const auto& a = lvl.parts[static_cast<std::size_t>(2 * j - 1)];
    const auto& b = lvl.parts[static_cast<std::size_t>(2 * j)];
    auto pf = regular_for_pair(g, a, b, lvl.k_i, schedule.p, c_trim,
                               derive_seed(seed, "level", static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(j)),
                               i, j, allow_reduced);
    out.shortfalls.insert(out.shortfalls.end(), pf.shortfalls.begin(), pf.shortfalls.end());
    if (pf.factor) out.factors.push_back(std::move(*pf.factor));
  }
  return out;
}

}  // namespace hampack
