#pragma once

#include <functional>
#include <vector>

#include "digraph.hpp"
#include "scc.hpp"

namespace dygx {

// The condensation-extension peeling: given a partition of V' (the SCCs of
// G - X) presented as supernode ids, and a distinguished vertex x, derive the
// SCC of x in G - (X \ {x}) by peeling zero-in-degree supernodes from
// H' = COND(G-X) + E(x, .) and zero-out-degree ones from H'' = COND(G-X) +
// E(., x). Returns the supernodes strongly connected to x.
struct PeelResult {
  std::vector<int> merged_supernodes;  // supernode ids joining x's SCC
};

// `comp` maps vertex -> supernode id (-1 for vertices outside the level's
// universe); `universe` lists the vertices present (excluding x itself).
PeelResult peel_extend(const DiGraph& g, const std::vector<int>& comp,
                       int comp_count, int x);

// Separator stack: an ordered list of separator vertices layered over a
// base partition (the SCCs of G minus all separators). Level j merges
// separator vertex sigma_j into the condensation below it. The stack
// recomputes its levels bottom-up with the condensation peeling rule.
class LackiStack {
 public:
  // base_partition(v) must return the base supernode id of v, or -1 when v is
  // a separator vertex or deleted.
  using BaseFn = std::function<int(int)>;

  LackiStack(const DiGraph* g, BaseFn base, int base_count);

  void push_separator(int v);  // prepends a new bottom level
  void refresh();              // recompute all levels (call after updates)

  bool same_scc(int u, int v) const;  // per the full graph G
  // Simple u -> v path inside their common SCC; empty when u == v.
  // `base_path(u, v)` supplies paths inside base supernodes.
  using BasePathFn = std::function<std::vector<int>(int, int)>;
  std::vector<int> query_path(int u, int v, const BasePathFn& base_path) const;

  int levels() const { return static_cast<int>(seps_.size()); }
  const std::vector<int>& separators() const { return seps_; }
  // Partition at the top level (the SCCs of all of G).
  std::vector<int> top_partition() const;

 private:
  struct LevelData {
    std::vector<int> comp;  // vertex -> supernode id at this level
    int count = 0;
  };

  std::vector<int> path_in_level(int level, int u, int v,
                                 const BasePathFn& base_path) const;
  int comp_at(int level, int v) const;

  const DiGraph* g_;
  BaseFn base_;
  int base_count_ = 0;
  std::vector<int> seps_;  // seps_[0] = newest (bottom-most) separator
  std::vector<LevelData> levels_;  // levels_[j] = after merging seps_[j]
  LevelData base_level_;
};

}  // namespace dygx
