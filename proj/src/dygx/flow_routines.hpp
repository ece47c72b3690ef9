#pragma once

#include <optional>
#include <vector>

#include "flow_kernel.hpp"

namespace dygx {

// Common result shape for the bounded-height flow subroutines: either a
// preflow with small excess or a level cut whose inequality has been
// re-verified from raw graph data before returning.
struct FlowOrCut {
  std::optional<Preflow> preflow;
  std::vector<int> cut_side;  // S, when no preflow
  Rat cut_capacity;           // c(E(S, V \ S))
  Rat cut_bound;              // verified right-hand side

  bool routed() const { return preflow.has_value(); }
};

// Local flow. Requires a 1/d-integral problem with Delta(v) <= delta_bar*deg(v)
// for every v; T(v) >= deg(v) is required on every vertex that is not a pure
// source (the boundary-source instances of one-shot pruning exempt them).
// Cut arm: z/delta_bar < vol(S), c(E(S,V\S)) <= Delta(S)-T(S)-z +
// vol^c(S)*10*ceil_log2(C)/h. When T(v) >= deg(v) holds globally,
// vol(S) <= Delta(V) is asserted as well.
FlowOrCut local_flow(const DiGraph& g, const FlowProblem& pi, const Rat& z,
                     const Rat& delta_bar, const Int& h);

// Global flow. Requires Delta(V) <= T(V) and Delta(v), T(v) <= 1. Cut arm:
// |S|, |V\S| > z and c(E(S,V\S)) <= Delta(S)-T(S)-z +
// min{vol^c(S), vol^c(V\S)}*10*ceil_log2(C)/h.
FlowOrCut global_flow(const DiGraph& g, const FlowProblem& pi, const Rat& z,
                      const Int& h);

// Matching flow on a bipartite graph with all edges directed L -> R.
// Cut arm: |S|, |V\S| > z and c(E(S,V\S)) <= Delta(S)-T(S)-z +
// 2*(Delta(V)-z)/h. The alternating-level property of the alternating-level property is asserted.
FlowOrCut matching_flow(const DiGraph& g, const std::vector<int>& left,
                        const std::vector<int>& right, const FlowProblem& pi,
                        const Rat& z, const Int& h);

// Capacity-weighted degree sums used by the level-cut bounds.
Rat cap_volume(const DiGraph& g, const FlowProblem& pi,
               const std::vector<char>& in_s, bool inside);
Rat cut_capacity_out(const DiGraph& g, const FlowProblem& pi,
                     const std::vector<char>& in_s);

}  // namespace dygx
