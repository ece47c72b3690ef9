#include "condensation.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace dygx {

PeelResult peel_extend(const DiGraph& g, const std::vector<int>& comp,
                       int comp_count, int x) {
  // Quotient arcs among supernodes, plus the arcs induced by x. The
  // condensation is a DAG, so peeling zero-in-degree (resp. zero-out-degree)
  // nodes leaves exactly the part reachable from (resp. reaching) x.
  int xn = comp_count;  // node id for x
  std::vector<std::vector<int>> out(comp_count + 1), in(comp_count + 1);
  auto node_of = [&](int v) -> int {
    if (v == x) return xn;
    return comp[v];
  };
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    int a = node_of(ed.tail), b = node_of(ed.head);
    if (a < 0 || b < 0 || a == b) continue;
    out[a].push_back(b);
    in[b].push_back(a);
  }
  auto survivors = [&](bool forward) {
    // forward: peel in-degree-0 nodes (anything x cannot reach goes away)
    std::vector<long> deg(comp_count + 1, 0);
    for (int c = 0; c <= comp_count; ++c)
      deg[c] = static_cast<long>((forward ? in : out)[c].size());
    std::vector<char> dead(comp_count + 1, 0);
    std::deque<int> q;
    for (int c = 0; c < comp_count; ++c)
      if (deg[c] == 0) q.push_back(c);
    while (!q.empty()) {
      int c = q.front();
      q.pop_front();
      if (dead[c] || c == xn) continue;
      dead[c] = 1;
      for (int w : (forward ? out : in)[c]) {
        if (--deg[w] == 0 && w != xn) q.push_back(w);
      }
    }
    return dead;
  };
  std::vector<char> dead_fwd = survivors(true);
  std::vector<char> dead_bwd = survivors(false);
  PeelResult res;
  for (int c = 0; c < comp_count; ++c)
    if (!dead_fwd[c] && !dead_bwd[c]) res.merged_supernodes.push_back(c);
  return res;
}

LackiStack::LackiStack(const DiGraph* g, BaseFn base, int base_count)
    : g_(g), base_(std::move(base)), base_count_(base_count) {
  refresh();
}

void LackiStack::push_separator(int v) {
  seps_.insert(seps_.begin(), v);
  refresh();
}

void LackiStack::refresh() {
  int slots = g_->vertex_slots();
  base_level_.comp.assign(slots, -1);
  std::vector<char> is_sep(slots, 0);
  for (int s : seps_) is_sep[s] = 1;
  int maxc = -1;
  for (int v = 0; v < slots; ++v) {
    if (!g_->vertex_alive(v) || is_sep[v]) continue;
    base_level_.comp[v] = base_(v);
    maxc = std::max(maxc, base_level_.comp[v]);
  }
  base_level_.count = maxc + 1;
  levels_.assign(seps_.size(), {});
  const LevelData* below = &base_level_;
  for (size_t j = 0; j < seps_.size(); ++j) {
    int x = seps_[j];
    PeelResult pr = peel_extend(*g_, below->comp, below->count, x);
    LevelData& lv = levels_[j];
    lv.comp.assign(slots, -1);
    std::vector<int> remap(below->count, -1);
    int next = 0;
    std::vector<char> merged(below->count, 0);
    for (int c : pr.merged_supernodes) merged[c] = 1;
    int merged_id = -1;
    for (int c = 0; c < below->count; ++c) {
      if (merged[c]) {
        if (merged_id < 0) merged_id = next++;
        remap[c] = merged_id;
      } else {
        remap[c] = next++;
      }
    }
    if (merged_id < 0) merged_id = next++;  // x alone
    for (int v = 0; v < slots; ++v)
      if (below->comp[v] >= 0) lv.comp[v] = remap[below->comp[v]];
    lv.comp[x] = merged_id;
    lv.count = next;
    below = &lv;
  }
}

int LackiStack::comp_at(int level, int v) const {
  if (v < 0 || v >= static_cast<int>(base_level_.comp.size())) return -1;
  if (level < 0) return base_level_.comp[v];
  return levels_[level].comp[v];
}

bool LackiStack::same_scc(int u, int v) const {
  int top = static_cast<int>(seps_.size()) - 1;
  int cu = comp_at(top, u), cv = comp_at(top, v);
  return cu >= 0 && cu == cv;
}

std::vector<int> LackiStack::top_partition() const {
  int top = static_cast<int>(seps_.size()) - 1;
  if (top < 0) return base_level_.comp;
  return levels_[top].comp;
}

std::vector<int> LackiStack::path_in_level(int level, int u, int v,
                                           const BasePathFn& base_path) const {
  if (u == v) return {u};
  if (level < 0) return base_path(u, v);
  int x = seps_[level];
  int below_u = comp_at(level - 1, u), below_v = comp_at(level - 1, v);
  if (below_u >= 0 && below_u == below_v)
    return path_in_level(level - 1, u, v, base_path);
  int cu = comp_at(level, u);
  // BFS over the merged SCC's quotient nodes, x standing as its own node.
  const int xn = -2;
  auto node_of = [&](int w) -> int {
    if (w == x) return xn;
    int c = comp_at(level - 1, w);
    if (c < 0) return -1;
    if (comp_at(level, w) != cu) return -1;  // outside the merged SCC
    return c;
  };
  int start = node_of(u), goal = node_of(v);
  std::map<int, std::tuple<int, int, int>> pred;  // node -> (prev, tail, head)
  std::deque<int> q{start};
  pred[start] = {start, -1, -1};
  while (!q.empty() && !pred.count(goal)) {
    int cur = q.front();
    q.pop_front();
    for (int e : g_->edges()) {
      const Edge& ed = g_->edge(e);
      int a = node_of(ed.tail), b = node_of(ed.head);
      if (a != cur || b == -1 || b == cur) continue;
      if (pred.count(b)) continue;
      pred[b] = {cur, ed.tail, ed.head};
      q.push_back(b);
    }
  }
  if (!pred.count(goal))
    throw verify_error("LackiStack: merged SCC not connected in the quotient");
  std::vector<std::pair<int, int>> crossings;  // (tail, head) per hop
  int cur = goal;
  while (cur != start) {
    auto [prev, a, b] = pred[cur];
    crossings.push_back({a, b});
    cur = prev;
  }
  std::reverse(crossings.begin(), crossings.end());
  // Assemble: u -> a1 inside the first node, cross, b1 -> a2, cross, ...
  auto segment = [&](int from, int to) {
    if (from == to) return std::vector<int>{from};
    return path_in_level(level - 1, from, to, base_path);
  };
  std::vector<int> path;
  int entry = u;
  for (auto [a, b] : crossings) {
    std::vector<int> seg = segment(entry, a);
    if (seg.empty() || seg.front() != entry || seg.back() != a)
      throw verify_error("LackiStack: bad segment");
    path.insert(path.end(), seg.begin(), seg.end());
    entry = b;
  }
  std::vector<int> seg = segment(entry, v);
  if (seg.empty() || seg.front() != entry || seg.back() != v)
    throw verify_error("LackiStack: bad final segment");
  path.insert(path.end(), seg.begin(), seg.end());
  return path;
}

std::vector<int> LackiStack::query_path(int u, int v,
                                        const BasePathFn& base_path) const {
  if (!same_scc(u, v))
    throw input_error("LackiStack: endpoints not strongly connected");
  if (u == v) return {};
  // find the lowest level where they share a supernode
  int level = -1;
  if (comp_at(-1, u) < 0 || comp_at(-1, u) != comp_at(-1, v)) {
    level = 0;
    while (comp_at(level, u) < 0 || comp_at(level, u) != comp_at(level, v))
      ++level;
  }
  return path_in_level(level, u, v, base_path);
}

}  // namespace dygx
