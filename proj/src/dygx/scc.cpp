#include "scc.hpp"

#include <algorithm>

namespace dygx {

SccPartition scc_partition(const DiGraph& g) {
  int n = g.vertex_slots();
  SccPartition res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0;

  // Iterative Tarjan: frame = (vertex, position in its out list).
  struct Frame {
    int v;
    size_t i;
  };
  std::vector<Frame> call;
  for (int root = 0; root < n; ++root) {
    if (!g.vertex_alive(root) || index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::vector<int>& outs = g.out_raw(f.v);
      bool descended = false;
      while (f.i < outs.size()) {
        int eid = outs[f.i++];
        if (!g.edge_alive(eid)) continue;
        int w = g.edge(eid).head;
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      int v = f.v;
      call.pop_back();
      if (!call.empty()) call.back().i = call.back().i;  // resume parent
      if (low[v] == index[v]) {
        int cid = res.count++;
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.comp[w] = cid;
          if (w == v) break;
        }
      }
      if (!call.empty()) {
        int parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return res;
}

bool refines(const SccPartition& after, const SccPartition& before) {
  // For each block of `after`, all members must share a `before` block.
  std::vector<int> rep(after.count, -1);
  for (size_t v = 0; v < after.comp.size(); ++v) {
    int c = after.comp[v];
    if (c < 0) continue;
    if (before.comp[v] < 0) return false;
    if (rep[c] < 0)
      rep[c] = before.comp[v];
    else if (rep[c] != before.comp[v])
      return false;
  }
  return true;
}

bool is_strongly_connected(const DiGraph& g) {
  if (g.num_vertices() <= 1) return true;
  return scc_partition(g).count == 1;
}

}  // namespace dygx
