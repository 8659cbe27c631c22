#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace hampack::detail {

// Dinic's blocking-flow max-flow on an explicit residual graph.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

  int add_edge(int u, int v, std::int64_t cap) {
    const int id = static_cast<int>(to_.size());
    push(u, v, cap);
    push(v, u, 0);
    return id;
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      iter_ = first_;
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

  [[nodiscard]] std::int64_t flow_on(int id) const { return cap_[id ^ 1]; }

 private:
  void push(int u, int v, std::int64_t cap) {
    to_.push_back(v);
    cap_.push_back(cap);
    next_.push_back(head_[u]);
    head_[u] = static_cast<int>(to_.size()) - 1;
  }

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[u]; e != -1; e = next_[e]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          q.push(to_[e]);
        }
      }
    }
    first_ = head_;
    return level_[t] >= 0;
  }

  // Iterative augmenting search along the level graph.
  std::int64_t dfs(int s, int t, std::int64_t limit) {
    std::vector<int> path_edges;
    int u = s;
    for (;;) {
      if (u == t) {
        std::int64_t f = limit;
        for (int e : path_edges) f = std::min(f, cap_[e]);
        for (int e : path_edges) {
          cap_[e] -= f;
          cap_[e ^ 1] += f;
        }
        return f;
      }
      int& e = iter_[u];
      while (e != -1 && !(cap_[e] > 0 && level_[to_[e]] == level_[u] + 1)) e = next_[e];
      if (e == -1) {
        if (path_edges.empty()) return 0;
        level_[u] = -1;  // dead end: prune from this phase
        const int back = path_edges.back();
        path_edges.pop_back();
        u = to_[back ^ 1];
        iter_[u] = next_[iter_[u]];
        continue;
      }
      path_edges.push_back(e);
      u = to_[e];
    }
  }

  std::vector<int> head_, to_, next_;
  std::vector<std::int64_t> cap_;
  std::vector<int> level_, first_, iter_;
};

}  // namespace hampack::detail
