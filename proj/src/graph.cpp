#include "hampack/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace hampack {

Edge::Edge(Vertex a, Vertex b) {
  if (a == b) throw InvalidArgument("edge endpoints must differ (loop at " + std::to_string(a) + ")");
  u = std::min(a, b);
  v = std::max(a, b);
}

std::uint64_t edge_key(const Edge& e) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.u)) << 32) |
         static_cast<std::uint32_t>(e.v);
}

Graph::Graph(Vertex n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw InvalidArgument("vertex count must be non-negative");
}

Graph Graph::from_edges(Vertex n, std::span<const Edge> edges) {
  Graph g(n);
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (const Edge& e : sorted) {
    if (e.u == e.v) throw InvalidArgument("loop in edge list");
    if (e.u < 0 || e.v >= n || e.u > e.v)
      throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") out of range for n=" + std::to_string(n));
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::size_t> deg(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : sorted) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (Vertex v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adj_.resize(sorted.size() * 2);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // Lexicographic edge order makes every adjacency list come out sorted.
  for (const Edge& e : sorted) {
    g.adj_[fill[e.u]++] = e.v;
    g.adj_[fill[e.v]++] = e.u;
  }
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::min_degree() const noexcept {
  if (n_ == 0) return 0;
  std::size_t best = degree(0);
  for (Vertex v = 1; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (Vertex v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex w : neighbors(u)) {
      if (u < w) out.emplace_back(u, w);
    }
  }
  return out;
}

namespace {

void require_same_universe(const Graph& g, const Graph& h) {
  if (g.vertex_count() != h.vertex_count())
    throw InvalidArgument("graphs live on different vertex universes (" +
                          std::to_string(g.vertex_count()) + " vs " +
                          std::to_string(h.vertex_count()) + ")");
}

template <class Op>
Graph merge_adjacency(const Graph& g, const Graph& h, Op op) {
  require_same_universe(g, h);
  std::vector<Edge> out;
  std::vector<Vertex> buf;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    buf.clear();
    auto a = g.neighbors(u);
    auto b = h.neighbors(u);
    op(a, b, std::back_inserter(buf));
    for (Vertex w : buf) {
      if (u < w) out.emplace_back(u, w);
    }
  }
  return Graph::from_edges(g.vertex_count(), out);
}

}  // namespace

Graph graph_union(const Graph& g, const Graph& h) {
  return merge_adjacency(g, h, [](auto a, auto b, auto out) {
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), out);
  });
}

Graph graph_minus(const Graph& g, const Graph& h) {
  return merge_adjacency(g, h, [](auto a, auto b, auto out) {
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), out);
  });
}

Graph graph_intersection(const Graph& g, const Graph& h) {
  return merge_adjacency(g, h, [](auto a, auto b, auto out) {
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), out);
  });
}

namespace {

std::vector<char> membership(Vertex n, std::span<const Vertex> set, const char* what) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (Vertex v : set) {
    if (v < 0 || v >= n) throw InvalidArgument(std::string(what) + " contains an out-of-range vertex");
    in[v] = 1;
  }
  return in;
}

}  // namespace

Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  const auto in = membership(g.vertex_count(), keep, "vertex set");
  std::vector<Edge> out;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (!in[u]) continue;
    for (Vertex w : g.neighbors(u)) {
      if (u < w && in[w]) out.emplace_back(u, w);
    }
  }
  return Graph::from_edges(g.vertex_count(), out);
}

std::size_t degree_sum(const Graph& g) noexcept {
  std::size_t total = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) total += g.degree(v);
  return total;
}

EdgeStats edge_stats(const Graph& g, std::span<const Vertex> x, std::span<const Vertex> y,
                     std::span<const Vertex> u) {
  const Vertex n = g.vertex_count();
  const auto in_x = membership(n, x, "X");
  const auto in_y = membership(n, y, "Y");
  for (Vertex v = 0; v < n; ++v) {
    if (in_x[v] && in_y[v]) throw InvalidArgument("X and Y must be disjoint");
  }
  EdgeStats stats;
  for (Vertex v = 0; v < n; ++v) {
    if (!in_x[v]) continue;
    for (Vertex w : g.neighbors(v)) {
      if (in_x[w] && v < w) ++stats.e_x;
      if (in_y[w]) ++stats.e_xy;
    }
  }
  stats.neighborhood = external_neighborhood(g, u);
  return stats;
}

std::vector<Vertex> external_neighborhood(const Graph& g, std::span<const Vertex> u) {
  const auto in_u = membership(g.vertex_count(), u, "U");
  std::vector<char> seen(in_u.size(), 0);
  std::vector<Vertex> out;
  for (Vertex v : u) {
    for (Vertex w : g.neighbors(v)) {
      if (!in_u[w] && !seen[w]) {
        seen[w] = 1;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t edges_inside(const Graph& g, std::span<const Vertex> a) {
  const auto in = membership(g.vertex_count(), a, "vertex set");
  std::size_t count = 0;
  for (Vertex v : a) {
    if (!in[v]) continue;
    for (Vertex w : g.neighbors(v)) {
      if (in[w] && v < w) ++count;
    }
  }
  // Duplicate ids in `a` would double count; membership() collapses them.
  return count;
}

// ---------------------------------------------------------------------------
// BipartitePair

BipartitePair::BipartitePair(std::vector<Vertex> left, std::vector<Vertex> right,
                             std::span<const Edge> cross_edges)
    : left_(std::move(left)), right_(std::move(right)) {
  Vertex top = 0;
  for (Vertex v : left_) top = std::max(top, v + 1);
  for (Vertex v : right_) top = std::max(top, v + 1);
  std::vector<std::int32_t> side(static_cast<std::size_t>(top), -1);
  std::vector<std::int32_t> local(static_cast<std::size_t>(top), -1);
  for (std::size_t i = 0; i < left_.size(); ++i) {
    if (left_[i] < 0) throw InvalidArgument("negative vertex id");
    if (side[left_[i]] != -1) throw InvalidArgument("duplicate vertex in bipartite sides");
    side[left_[i]] = 0;
    local[left_[i]] = static_cast<std::int32_t>(i);
  }
  for (std::size_t j = 0; j < right_.size(); ++j) {
    if (right_[j] < 0) throw InvalidArgument("negative vertex id");
    if (side[right_[j]] != -1) throw InvalidArgument("bipartite sides must be disjoint");
    side[right_[j]] = 1;
    local[right_[j]] = static_cast<std::int32_t>(j);
  }
  std::vector<std::pair<std::int32_t, std::int32_t>> local_edges;
  local_edges.reserve(cross_edges.size());
  for (const Edge& e : cross_edges) {
    if (e.u < 0 || e.v >= top || side[e.u] == -1 || side[e.v] == -1 || side[e.u] == side[e.v])
      throw InvalidArgument("bipartite edge does not cross the two sides");
    if (side[e.u] == 0)
      local_edges.emplace_back(local[e.u], local[e.v]);
    else
      local_edges.emplace_back(local[e.v], local[e.u]);
  }
  index(local_edges);
}

void BipartitePair::index(std::span<const std::pair<std::int32_t, std::int32_t>> local_edges) {
  std::vector<std::pair<std::int32_t, std::int32_t>> sorted(local_edges.begin(), local_edges.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  left_off_.assign(left_.size() + 1, 0);
  right_off_.assign(right_.size() + 1, 0);
  for (auto [i, j] : sorted) {
    ++left_off_[i + 1];
    ++right_off_[j + 1];
  }
  for (std::size_t i = 0; i < left_.size(); ++i) left_off_[i + 1] += left_off_[i];
  for (std::size_t j = 0; j < right_.size(); ++j) right_off_[j + 1] += right_off_[j];
  left_adj_.assign(sorted.size(), 0);
  right_adj_.assign(sorted.size(), 0);
  std::vector<std::size_t> lf(left_off_.begin(), left_off_.end() - 1);
  std::vector<std::size_t> rf(right_off_.begin(), right_off_.end() - 1);
  for (auto [i, j] : sorted) {
    left_adj_[lf[i]++] = j;
    right_adj_[rf[j]++] = i;
  }
}

BipartitePair BipartitePair::induced(const Graph& g, std::span<const Vertex> left,
                                     std::span<const Vertex> right) {
  const Vertex n = g.vertex_count();
  std::vector<std::int32_t> right_local(static_cast<std::size_t>(n), -1);
  for (std::size_t j = 0; j < right.size(); ++j) {
    if (right[j] < 0 || right[j] >= n) throw InvalidArgument("vertex out of range");
    right_local[right[j]] = static_cast<std::int32_t>(j);
  }
  BipartitePair bp;
  bp.left_.assign(left.begin(), left.end());
  bp.right_.assign(right.begin(), right.end());
  std::vector<std::pair<std::int32_t, std::int32_t>> local_edges;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (left[i] < 0 || left[i] >= n) throw InvalidArgument("vertex out of range");
    if (right_local[left[i]] != -1) throw InvalidArgument("bipartite sides must be disjoint");
    for (Vertex w : g.neighbors(left[i])) {
      if (right_local[w] != -1) local_edges.emplace_back(static_cast<std::int32_t>(i), right_local[w]);
    }
  }
  bp.index(local_edges);
  return bp;
}

std::vector<Edge> BipartitePair::cross_edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < left_.size(); ++i) {
    for (auto j : left_neighbors(i)) out.emplace_back(left_[i], right_[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BipartitePair BipartitePair::restrict(std::span<const std::size_t> left_idx,
                                      std::span<const std::size_t> right_idx) const {
  std::vector<std::int32_t> rmap(right_.size(), -1);
  for (std::size_t k = 0; k < right_idx.size(); ++k) rmap[right_idx[k]] = static_cast<std::int32_t>(k);
  BipartitePair bp;
  bp.left_.reserve(left_idx.size());
  bp.right_.reserve(right_idx.size());
  for (auto i : left_idx) bp.left_.push_back(left_[i]);
  for (auto j : right_idx) bp.right_.push_back(right_[j]);
  std::vector<std::pair<std::int32_t, std::int32_t>> local_edges;
  for (std::size_t k = 0; k < left_idx.size(); ++k) {
    for (auto j : left_neighbors(left_idx[k])) {
      if (rmap[j] != -1) local_edges.emplace_back(static_cast<std::int32_t>(k), rmap[j]);
    }
  }
  bp.index(local_edges);
  return bp;
}

// ---------------------------------------------------------------------------
// Edge-list IO

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::size_t lineno) {
    if (!std::getline(in, line)) throw ParseError("edge list truncated at line " + std::to_string(lineno));
    if (!line.empty() && line.back() == '\r') throw ParseError("edge list must use LF line endings");
  };
  next_line(1);
  long long n = -1, m = -1;
  {
    std::istringstream hdr(line);
    std::string extra;
    if (!(hdr >> n >> m) || (hdr >> extra) || n < 0 || m < 0)
      throw ParseError("bad header line, expected \"n m\"");
  }
  if (n > (1LL << 30)) throw ParseError("vertex count too large");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    const auto lineno = static_cast<std::size_t>(k + 2);
    next_line(lineno);
    std::istringstream row(line);
    long long a = -1, b = -1;
    std::string extra;
    if (!(row >> a >> b) || (row >> extra))
      throw ParseError("bad edge at line " + std::to_string(lineno));
    if (a == b) throw ParseError("loop at line " + std::to_string(lineno));
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw ParseError("vertex out of range at line " + std::to_string(lineno));
    if (a > b) throw ParseError("edge not in canonical u < v order at line " + std::to_string(lineno));
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      throw ParseError("more edge lines than announced in the header");
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError("duplicate edge in edge list");
  return Graph::from_edges(static_cast<Vertex>(n), sorted);
}

}  // namespace hampack
