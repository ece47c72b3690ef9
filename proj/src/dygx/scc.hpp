#pragma once

#include <vector>

#include "digraph.hpp"

namespace dygx {

// Tarjan over alive vertices. Returns component id per vertex slot (-1 for
// tombstoned slots); ids are dense in [0, count).
struct SccPartition {
  std::vector<int> comp;
  int count = 0;

  bool same(int u, int v) const { return comp[u] >= 0 && comp[u] == comp[v]; }
};

SccPartition scc_partition(const DiGraph& g);

// True if every block of `after` is contained in one block of `before`.
bool refines(const SccPartition& after, const SccPartition& before);

bool is_strongly_connected(const DiGraph& g);

}  // namespace dygx
