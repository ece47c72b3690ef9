#pragma once

// Test-only helpers: independent oracles (kept deliberately naive and apart
// from the library's own code paths) and seeded instance generators.

#include <algorithm>
#include <deque>
#include <random>
#include <vector>

#include "dygx/digraph.hpp"
#include "dygx/flow_kernel.hpp"

namespace testsup {

using dygx::DiGraph;
using dygx::FlowProblem;
using dygx::Int;
using dygx::Rat;

// Exact max-flow by BFS augmenting paths (Edmonds-Karp) on the
// super-source/super-sink graph. Independent of the Dinic kernel.
inline Rat max_flow_oracle(const DiGraph& g, const FlowProblem& pi) {
  int n = g.vertex_slots();
  int s = n, t = n + 1;
  struct A {
    int to, rev;
    Rat cap;
  };
  std::vector<std::vector<A>> adj(n + 2);
  auto add = [&](int u, int v, Rat c) {
    adj[u].push_back({v, static_cast<int>(adj[v].size()), c});
    adj[v].push_back({u, static_cast<int>(adj[u].size()) - 1, Rat(0)});
  };
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    add(g.edge(e).tail, g.edge(e).head, pi.cap[e]);
  }
  for (int v = 0; v < n; ++v) {
    if (!g.vertex_alive(v)) continue;
    if (pi.delta[v] > 0) add(s, v, pi.delta[v]);
    if (pi.sink[v] > 0) add(v, t, pi.sink[v]);
  }
  Rat value = 0;
  while (true) {
    std::vector<std::pair<int, int>> pred(n + 2, {-1, -1});
    std::deque<int> q{s};
    pred[s] = {s, 0};
    while (!q.empty() && pred[t].first < 0) {
      int u = q.front();
      q.pop_front();
      for (size_t i = 0; i < adj[u].size(); ++i) {
        const A& a = adj[u][i];
        if (a.cap > 0 && pred[a.to].first < 0) {
          pred[a.to] = {u, static_cast<int>(i)};
          q.push_back(a.to);
        }
      }
    }
    if (pred[t].first < 0) break;
    Rat aug = -1;
    for (int v = t; v != s;) {
      auto [u, i] = pred[v];
      if (aug < 0 || adj[u][i].cap < aug) aug = adj[u][i].cap;
      v = u;
    }
    for (int v = t; v != s;) {
      auto [u, i] = pred[v];
      adj[u][i].cap -= aug;
      adj[adj[u][i].to][adj[u][i].rev].cap += aug;
      v = u;
    }
    value += aug;
  }
  return value;
}

// SCC oracle by transitive closure (Floyd-Warshall style reachability).
inline std::vector<int> scc_by_closure(const DiGraph& g) {
  int n = g.vertex_slots();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v)
    if (g.vertex_alive(v)) reach[v][v] = 1;
  for (int e = 0; e < g.edge_slots(); ++e)
    if (g.edge_alive(e)) reach[g.edge(e).tail][g.edge(e).head] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  std::vector<int> comp(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (!g.vertex_alive(v) || comp[v] >= 0) continue;
    comp[v] = next;
    for (int w = v + 1; w < n; ++w)
      if (g.vertex_alive(w) && reach[v][w] && reach[w][v]) comp[w] = next;
    ++next;
  }
  return comp;
}

// Second, independent sparse-cut enumerator: Gray-code subset walk with
// incremental delta maintenance (the library one rescans edges per subset).
struct SparseCutFound {
  bool found = false;
  std::vector<int> side;
};

inline SparseCutFound find_sparse_cut_gray(const DiGraph& g, const Rat& phi) {
  std::vector<int> verts = g.vertices();
  int n = static_cast<int>(verts.size());
  SparseCutFound res;
  if (n < 2) return res;
  std::vector<int> slot(g.vertex_slots(), -1);
  for (int i = 0; i < n; ++i) slot[verts[i]] = i;
  Rat total = g.total_volume();
  std::vector<char> in_s(n, 0);
  Rat dout = 0, din = 0, vol = 0;
  auto toggle = [&](int i) {
    int v = verts[i];
    bool entering = !in_s[i];
    for (int e : g.out_edges(v)) {
      int w = slot[g.edge(e).head];
      if (w == i) continue;  // self loop never crosses
      bool other_in = in_s[w];
      const Rat& wt = g.edge(e).w;
      if (entering) {
        if (other_in)
          din -= wt;
        else
          dout += wt;
      } else {
        if (other_in)
          din += wt;
        else
          dout -= wt;
      }
    }
    for (int e : g.in_edges(v)) {
      int w = slot[g.edge(e).tail];
      if (w == i) continue;
      bool other_in = in_s[w];
      const Rat& wt = g.edge(e).w;
      if (entering) {
        if (other_in)
          dout -= wt;
        else
          din += wt;
      } else {
        if (other_in)
          dout += wt;
        else
          din -= wt;
      }
    }
    if (entering)
      vol += g.deg(v);
    else
      vol -= g.deg(v);
    in_s[i] = !in_s[i];
  };
  unsigned long count = 1ul << n;
  unsigned long prev_gray = 0;
  for (unsigned long k = 1; k < count; ++k) {
    unsigned long gray = k ^ (k >> 1);
    unsigned long diff = gray ^ prev_gray;
    int bit = 0;
    while (!(diff >> bit & 1)) ++bit;
    toggle(bit);
    prev_gray = gray;
    unsigned long sz = static_cast<unsigned long>(
        std::count(in_s.begin(), in_s.end(), static_cast<char>(1)));
    if (sz == 0 || sz == static_cast<unsigned long>(n)) continue;
    if (2 * vol > total) continue;
    if (std::min(dout, din) < phi * vol) {
      res.found = true;
      for (int i = 0; i < n; ++i)
        if (in_s[i]) res.side.push_back(verts[i]);
      return res;
    }
  }
  return res;
}

inline DiGraph random_graph(std::mt19937_64& rng, int n, int extra_edges,
                            bool ensure_weak = false) {
  DiGraph g(n);
  auto pick = [&](int m) { return static_cast<int>(rng() % m); };
  if (ensure_weak)
    for (int i = 1; i < n; ++i) {
      int j = pick(i);
      if (rng() & 1)
        g.add_edge(j, i, 1);
      else
        g.add_edge(i, j, 1);
    }
  for (int k = 0; k < extra_edges; ++k) {
    int u = pick(n), v = pick(n);
    g.add_edge(u, v, 1);
  }
  return g;
}

}  // namespace testsup
