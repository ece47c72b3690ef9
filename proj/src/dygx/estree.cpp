#include "estree.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace dygx {

namespace {
constexpr long kGone = -1;
}

ESTree::ESTree(const DiGraph& g, int root, long depth_cap, bool reverse)
    : g_(reverse ? g.reversed() : g), root_(root), cap_(depth_cap),
      reverse_(reverse) {
  if (!g_.vertex_alive(root)) throw input_error("ESTree: dead root");
  level_.assign(g_.vertex_slots(), kGone);
  parent_.assign(g_.vertex_slots(), -1);
  std::deque<int> q{root_};
  level_[root_] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (level_[u] >= cap_) continue;
    for (int e : g_.out_edges(u)) {
      int w = g_.edge(e).head;
      if (level_[w] >= 0) continue;
      level_[w] = level_[u] + 1;
      parent_[w] = u;
      q.push_back(w);
    }
  }
}

long ESTree::dist_via(int v) const {
  long best = kGone;
  for (int e : g_.in_edges(v)) {
    int w = g_.edge(e).tail;
    if (level_[w] < 0) continue;
    long cand = level_[w] + 1;
    if (best < 0 || cand < best) best = cand;
  }
  if (best > cap_) best = kGone;
  return best;
}

std::vector<int> ESTree::settle(std::vector<int> dirty) {
  // Deletions only increase levels; relax to a fixpoint.
  std::vector<int> fallen;
  std::deque<int> q(dirty.begin(), dirty.end());
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (v == root_ || !g_.vertex_alive(v) || level_[v] < 0) continue;
    long best = dist_via(v);
    if (best == level_[v]) {
      // keep the level; repair the parent pointer if needed
      if (parent_[v] < 0 || level_[parent_[v]] != level_[v] - 1 ||
          g_.find_edge(parent_[v], v) < 0) {
        for (int e : g_.in_edges(v)) {
          int w = g_.edge(e).tail;
          if (level_[w] >= 0 && level_[w] + 1 == level_[v]) {
            parent_[v] = w;
            break;
          }
        }
      }
      continue;
    }
    if (best < 0) {
      level_[v] = kGone;
      parent_[v] = -1;
      fallen.push_back(v);
    } else {
      level_[v] = best;
      for (int e : g_.in_edges(v)) {
        int w = g_.edge(e).tail;
        if (level_[w] >= 0 && level_[w] + 1 == best) {
          parent_[v] = w;
          break;
        }
      }
    }
    for (int e : g_.out_edges(v)) q.push_back(g_.edge(e).head);
  }
  return fallen;
}

std::vector<int> ESTree::delete_edge(int edge_id) {
  if (!g_.edge_alive(edge_id)) return {};
  int head = g_.edge(edge_id).head;
  g_.delete_edge(edge_id);
  return settle({head});
}

std::vector<int> ESTree::delete_vertex(int v) {
  if (!g_.vertex_alive(v)) return {};
  std::vector<int> dirty;
  for (int e : g_.out_edges(v)) dirty.push_back(g_.edge(e).head);
  g_.delete_vertex(v);
  level_[v] = kGone;
  parent_[v] = -1;
  return settle(dirty);
}

std::vector<int> ESTree::path_to_root(int v) const {
  std::vector<int> p;
  if (level_[v] < 0) return p;
  int cur = v;
  while (cur != root_) {
    p.push_back(cur);
    cur = parent_[cur];
    if (cur < 0 || static_cast<long>(p.size()) > cap_ + 2)
      throw verify_error("ESTree: broken parent chain");
  }
  p.push_back(root_);
  return p;
}

SeparatorResult balanced_separator(const DiGraph& g, int r, long d) {
  if (!g.vertex_alive(r)) throw input_error("balanced_separator: dead root");
  if (d < 1) throw input_error("balanced_separator: depth must be positive");
  int n = g.num_vertices();
  std::vector<long> dist(g.vertex_slots(), -1);
  std::vector<std::vector<int>> layers(1, {r});
  dist[r] = 0;
  long ball = 1;
  Rat coeff = Rat(2 * ceil_log2(Rat(std::max(n, 2)))) / Rat(Int(d));
  for (long i = 1; i <= d; ++i) {
    std::vector<int> next;
    for (int u : layers[i - 1])
      for (int e : g.out_edges(u)) {
        int w = g.edge(e).head;
        if (dist[w] >= 0) continue;
        dist[w] = i;
        next.push_back(w);
      }
    ball += static_cast<long>(next.size());
    if (2 * ball > n)
      throw input_error("balanced_separator: ball exceeds n/2");
    layers.push_back(next);
    if (Rat(next.size()) <= coeff * Rat(ball)) {
      SeparatorResult res;
      for (long j = 0; j < i; ++j)
        res.inside.insert(res.inside.end(), layers[j].begin(), layers[j].end());
      res.layer = layers[i];
      res.sparsity_bound = coeff * Rat(ball);
      return res;
    }
  }
  throw verify_error("balanced_separator: no thin layer within depth d");
}

}  // namespace dygx
