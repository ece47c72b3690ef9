#pragma once

#include <optional>
#include <vector>

#include "digraph.hpp"

namespace dygx {

struct EdgeCutView {
  std::vector<int> side;  // S
  Rat delta_out;          // w(E(S, V\S))
  Rat delta_in;           // w(E(V\S, S))
  Rat vol_s;

  Rat min_delta() const { return delta_out < delta_in ? delta_out : delta_in; }
  bool out_attains_min() const { return delta_out <= delta_in; }
  bool in_attains_min() const { return delta_in <= delta_out; }
  bool sparse(const Rat& phi) const { return min_delta() < phi * vol_s; }
};

// Partition (L, S, R) with E(L,R) or E(R,L) empty.
enum class CutDirection { lr_empty, rl_empty };

struct VertexCutView {
  std::vector<int> left, sep, right;
  CutDirection direction = CutDirection::lr_empty;

  // phi-vertex-sparse: |S| < phi * |L| with |L| <= |R| assumed by callers
  // that need the normalized form.
  bool sparse(const Rat& phi) const {
    size_t small = std::min(left.size(), right.size());
    return Rat(sep.size()) < phi * Rat(small);
  }
};

EdgeCutView cut_measures(const DiGraph& g, const std::vector<int>& s);

bool verify_vertex_cut(const DiGraph& g, const VertexCutView& cut);

struct ExpanderCheckOptions {
  int exhaustive_threshold = 16;
  int vertex_threshold = 12;
  bool allow_sampling = false;  // heuristic mode for larger graphs
  int sample_count = 100000;
  unsigned long long seed = 1;
};

struct ExpanderCheck {
  bool certified = false;
  bool exhaustive = false;  // false = sampling heuristic, result unverified
  std::optional<EdgeCutView> witness_cut;
};

struct VertexExpanderCheck {
  bool certified = false;
  bool exhaustive = false;
  std::optional<VertexCutView> witness_cut;
};

// Def 3.1: no phi-sparse cut over all S with vol(S) <= vol(V\S).
ExpanderCheck check_expander(const DiGraph& g, const Rat& phi,
                             const ExpanderCheckOptions& opt = {});

VertexExpanderCheck check_vertex_expander(const DiGraph& g, const Rat& phi,
                                          const ExpanderCheckOptions& opt = {});

// Near phi-expander (Def 6.3/6.4): every S subset of A with
// vol_G(S) <= vol_G(A)/2 has delta_out >= phi*vol(S), in G and G^rev.
struct NearExpanderCheck {
  bool certified = false;
  std::vector<int> violating_set;  // empty iff certified
  bool out_direction = true;       // which direction failed
};

NearExpanderCheck check_near_expander(const DiGraph& g,
                                      const std::vector<int>& a, const Rat& phi,
                                      int exhaustive_threshold = 20);

// Sparsity psi(G) of Def 7.2 and the sparsity of one cut.
Rat cut_sparsity(const DiGraph& g, const std::vector<int>& s);

struct SparsityResult {
  Rat psi;                      // min cut sparsity; huge value if |V| < 2
  std::vector<int> argmin_set;  // side attaining it
};

// Exhaustive Psi(G) over all proper subsets (|V| <= threshold required).
SparsityResult graph_sparsity(const DiGraph& g, int exhaustive_threshold = 16);

// Largest exact phi at which g has no phi-sparse cut, measured exhaustively
// below the threshold; a conservative constant above it. Used to
// parameterize pruning ladders from observed graphs.
Rat measured_edge_expansion(const DiGraph& g, int exhaustive_threshold = 12);

}  // namespace dygx
