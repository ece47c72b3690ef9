#pragma once

#include <optional>
#include <vector>

#include "cuts.hpp"
#include "flow_kernel.hpp"

namespace dygx {

// Vertex-capacitated flow problem on an incidence graph G = (V u V_inf, E):
// regular vertices carry kappa/Delta/T, the others stand for hyperedges and
// are uncapacitated. Every edge must join a regular vertex and a hyperedge
// vertex (ordinary graphs pass one hyperedge vertex per edge).
struct VertexCapProblem {
  std::vector<char> regular;
  std::vector<Rat> kappa;
  std::vector<Rat> delta;
  std::vector<Rat> sink;
  Rat unit = 1;

  Rat total_kappa() const;
};

struct VertexFlowResult {
  bool has_flow = false;
  // Flow arm: short-path-filtered decomposition, paths in incidence terms.
  PathDecomposition paths;
  Rat excess;
  Rat kept_value;
  Int length_bound;  // kept paths have at most this many incidence edges
  // Cut arm: partition of the regular vertices; no L->R path in G - S.
  std::vector<int> left, sep, right;
  Rat sep_kappa;
  Rat sep_bound;
};

// Constant behind the O(log kappa(V) / h) slack in the vertex-capacitated flow, chained
// from the constants of the level-cut accounting chain.
inline constexpr int kVertexCutSlackConstant = 5280;

VertexFlowResult vertex_capacitated_flow(const DiGraph& gb,
                                         const VertexCapProblem& pi,
                                         const Rat& z, const Int& h,
                                         const Rat& eps_len);

// the balanced free-set split: split the free set so both halves carry at least
// kappa(F)/4, assuming every single kappa is at most kappa(V)/2.
std::pair<std::vector<int>, std::vector<int>> balanced_free_split(
    const std::vector<Rat>& kappa, const std::vector<int>& f);

// Congested matching: either a 6*phi-vertex-sparse cut with
// min{|L|,|R|} >= eps*n/10, or an integral matching A->B of size
// >= (1-eps)|A| embedded with vertex congestion floor(1/phi).
struct CongestedMatchingResult {
  bool has_matching = false;
  std::vector<std::pair<int, int>> matching;
  std::vector<FlowPath> embedding;  // paths in the host graph, same order
  Rat congestion_bound;             // floor(1/phi)
  Int length_bound;
  std::optional<VertexCutView> cut;
};

CongestedMatchingResult vertex_congested_matching(const DiGraph& g,
                                                  const std::vector<int>& a,
                                                  const std::vector<int>& b,
                                                  const Rat& phi,
                                                  const Rat& eps);

// Builds the incidence graph of an ordinary digraph: original vertex ids are
// preserved, vertex n_slots + k stands for edge k of `edge_list`.
struct IncidenceGraph {
  DiGraph graph;
  std::vector<int> edge_list;          // host edge id per hyperedge vertex
  std::vector<int> hyper_vertex;       // hyperedge vertex per host edge id
  int host_slots = 0;
};

IncidenceGraph incidence_of(const DiGraph& g);

// Converts an incidence path (v, x_e, v', x_e', ...) to a host-graph path.
FlowPath incidence_path_to_host(const IncidenceGraph& inc, const FlowPath& p);

}  // namespace dygx
