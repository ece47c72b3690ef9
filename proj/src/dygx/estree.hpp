#pragma once

#include <vector>

#include "digraph.hpp"

namespace dygx {

// Even-Shiloach tree: explicit shortest-path tree from a root, truncated at
// a depth cap, maintained under edge deletions. With reverse = true the tree
// follows edges toward the root instead (distances in G^rev).
class ESTree {
 public:
  ESTree(const DiGraph& g, int root, long depth_cap, bool reverse);

  // Deletes an edge / a vertex; returns vertices newly fallen out of range.
  std::vector<int> delete_edge(int edge_id);
  std::vector<int> delete_vertex(int v);

  bool in_tree(int v) const { return level_[v] >= 0; }
  long level(int v) const { return level_[v]; }
  int parent(int v) const { return parent_[v]; }  // toward the root
  int root() const { return root_; }
  const DiGraph& graph() const { return g_; }

  // Walks v -> ... -> root; empty if v is out of the tree.
  std::vector<int> path_to_root(int v) const;

 private:
  std::vector<int> settle(std::vector<int> dirty);
  long dist_via(int v) const;  // 1 + min level over usable in-arcs

  DiGraph g_;
  int root_;
  long cap_;
  bool reverse_;
  std::vector<long> level_;   // -1 = out of tree
  std::vector<int> parent_;
};

// Balanced separator: BFS ball around r (out-direction) until a
// thin layer appears. Requires |B(r, d)| <= n/2.
struct SeparatorResult {
  std::vector<int> inside;  // V_Sep, contains r
  std::vector<int> layer;   // S_Sep
  Rat sparsity_bound;       // the c*log(n)/d threshold that was met
};

SeparatorResult balanced_separator(const DiGraph& g, int r, long d);

}  // namespace dygx
