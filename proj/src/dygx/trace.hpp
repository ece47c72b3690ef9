#pragma once

#include <string>
#include <vector>

#include "digraph.hpp"

namespace dygx {

// Trace ops: D u v (delete edge), Q u v (same-scc query), P u v (path
// query), M (matching snapshot).
struct TraceOp {
  char kind = 'D';
  int u = -1;
  int v = -1;
};

struct Trace {
  std::string model = "random";
  unsigned long long seed = 0;
  std::vector<TraceOp> ops;
};

struct TraceParams {
  unsigned long long seed = 1;
  // every query_stride deletions, emit Q and P probes (0 = none)
  int query_stride = 4;
  bool delete_all = true;
  long max_deletions = -1;  // cap when >= 0
};

// Uniform-random deletion order with optional query probes.
Trace gen_trace_random(const DiGraph& g, const TraceParams& params);

// The adaptive adversary: repeatedly query a path between two strongly
// connected vertices and delete the first surviving edge on it. Runs the
// oracle during generation, so the produced trace replays deterministically.
Trace gen_trace_adaptive(const DiGraph& g, const TraceParams& params);

// Matched-edge targeting for the decremental matching: snapshots the
// maintained matching and deletes one of its edges.
Trace gen_trace_matched(const DiGraph& g, const std::vector<int>& left,
                        const std::vector<int>& right, const Rat& eps,
                        const TraceParams& params);

std::string format_trace(const Trace& t);
Trace parse_trace_text(const std::string& text);
Trace load_trace_file(const std::string& path);

// Bipartite split convention for matching traces: vertices [0, k) on the
// left, [k, n) on the right, with k read from the edge structure.
std::pair<std::vector<int>, std::vector<int>> bipartite_split(const DiGraph& g);

}  // namespace dygx
