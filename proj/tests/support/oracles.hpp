#pragma once

// Reference implementations used only by tests. They share no code with the
// library: graphs are plain edge lists, the room is a std::set.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using EdgeList = std::vector<std::pair<int, int>>;  // (from, to)

inline bool acyclic(int n, const EdgeList& edges) {
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (auto [u, v] : edges) {
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return seen == n;
}

inline bool no_isolated(int n, const EdgeList& edges) {
  std::vector<bool> touched(n, false);
  for (auto [u, v] : edges) touched[u] = touched[v] = true;
  return std::all_of(touched.begin(), touched.end(), [](bool b) { return b; });
}

// Every edge must point from a later exiter to an earlier one.
inline bool respects_order(const std::vector<int>& order, const EdgeList& edges) {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return std::all_of(edges.begin(), edges.end(),
                     [&pos](auto e) { return pos[e.first] > pos[e.second]; });
}

// Room replay: at each exit the exiter and its absent parents enter; every
// other occupant must be a parent of the exiter.
inline bool room_closure(const std::vector<int>& order, const EdgeList& edges) {
  const int n = static_cast<int>(order.size());
  std::vector<std::set<int>> parents(n);
  for (auto [u, v] : edges) parents[v].insert(u);
  std::set<int> room;
  for (int v : order) {
    room.insert(v);
    for (int p : parents[v]) room.insert(p);
    for (int occupant : room) {
      if (occupant != v && !parents[v].count(occupant)) return false;
    }
    room.erase(v);
  }
  return true;
}

inline bool valid(const std::vector<int>& order, const EdgeList& edges) {
  const int n = static_cast<int>(order.size());
  return acyclic(n, edges) && no_isolated(n, edges) && respects_order(order, edges) &&
         room_closure(order, edges);
}

// N' by brute force over every m-subset of all n(n-1) ordered pairs, under
// exit order 0..n-1.
inline std::int64_t brute_count(int n, int m) {
  EdgeList pairs;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) pairs.push_back({u, v});
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int p = static_cast<int>(pairs.size());
  if (m > p) return 0;
  std::vector<bool> pick(p, false);
  std::fill(pick.begin(), pick.begin() + m, true);
  std::int64_t count = 0;
  do {
    EdgeList edges;
    for (int i = 0; i < p; ++i) {
      if (pick[i]) edges.push_back(pairs[i]);
    }
    if (valid(order, edges)) ++count;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return count;
}

// N' from the shape of valid graphs under exit order 0..n-1: node w's
// children are the l_w nodes exiting just before it. Counts choices
// l_w in [0, w] with sum m and no node left untouched.
inline std::int64_t interval_count(int n, int m) {
  std::vector<int> len(n, 0);
  std::int64_t count = 0;
  while (true) {
    int total = std::accumulate(len.begin(), len.end(), 0);
    if (total == m) {
      std::vector<bool> touched(n, false);
      for (int w = 0; w < n; ++w) {
        if (len[w] > 0) touched[w] = true;
        for (int c = w - len[w]; c < w; ++c) touched[c] = true;
      }
      if (std::all_of(touched.begin(), touched.end(), [](bool b) { return b; })) ++count;
    }
    int w = 1;
    while (w < n && len[w] == w) len[w++] = 0;
    if (w == n) break;
    ++len[w];
  }
  return count;
}

// Edge set realised by interval lengths (node 0 has none).
inline EdgeList interval_edges(const std::vector<int>& len) {
  EdgeList edges;
  for (int w = 0; w < static_cast<int>(len.size()); ++w) {
    for (int c = w - len[w]; c < w; ++c) edges.push_back({w, c});
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Pair states among (c1, c2, c3) as printed in the truth table:
// 0 absent, 1 forward (ci -> cj, i < j), 2 backward.
struct TruthRow {
  std::array<int, 3> pairs;  // (1,2), (1,3), (2,3)
  int answer;                // 1, 2, 3 for b1, b2, b3; 0 for a cycle
};

// The 27 configurations of the k = 3 truth table in printed order: nine
// rows over pairs (1,2) and (2,3), three columns over pair (1,3).
inline const std::vector<TruthRow>& truth_table() {
  static const std::vector<TruthRow> rows{
      {{0, 0, 0}, 1}, {{0, 1, 0}, 3}, {{0, 2, 0}, 1},
      {{1, 0, 0}, 2}, {{1, 1, 0}, 2}, {{1, 2, 0}, 2},
      {{2, 0, 0}, 1}, {{2, 1, 0}, 3}, {{2, 2, 0}, 1},
      {{0, 0, 1}, 1}, {{0, 1, 1}, 3}, {{0, 2, 1}, 1},
      {{1, 0, 1}, 2}, {{1, 1, 1}, 3}, {{1, 2, 1}, 0},
      {{2, 0, 1}, 1}, {{2, 1, 1}, 3}, {{2, 2, 1}, 1},
      {{0, 0, 2}, 1}, {{0, 1, 2}, 3}, {{0, 2, 2}, 1},
      {{1, 0, 2}, 2}, {{1, 1, 2}, 2}, {{1, 2, 2}, 2},
      {{2, 0, 2}, 1}, {{2, 1, 2}, 0}, {{2, 2, 2}, 1},
  };
  return rows;
}

}  // namespace oracle
