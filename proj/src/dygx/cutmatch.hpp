#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cuts.hpp"
#include "digraph.hpp"

namespace dygx {

struct CutMatchOptions {
  int exhaustive_threshold = 16;
  // Thresholds of the CutOrCertify dichotomy; defaults follow the
  // (n/10, n/100) pair, the alternative (n/4, n/1000) pair is configurable.
  Rat balance_fraction{1, 10};
  Rat weight_fraction{1, 100};
  int round_cap_constant = 40;
  bool instrument_entropy = true;
  int sweep_power_iterations = 40;
  unsigned long long seed = 0xC0FFEEull;
};

// Either a balanced low-weight bipartition (A, B) or a large certified-sparse
// subset S with its measured sparsity.
struct CutCertificate {
  bool is_cut = false;
  std::vector<int> a, b;
  Rat cross_weight;
  std::vector<int> cert_set;
  Rat psi;
  bool verified = true;  // false when the sweep heuristic certified
};

CutCertificate cut_or_certify(const DiGraph& w, const Int& d,
                              const CutMatchOptions& opt = {});

// A directed fractional matching: edge list with weights; perfect means
// every source has out-weight exactly 1 and every target in-weight exactly 1.
struct DirectedMatching {
  struct Arc {
    int from, to;
    Rat w;
  };
  std::vector<Arc> arcs;
};

using MatcherFn = std::function<std::pair<DirectedMatching, DirectedMatching>(
    const std::vector<int>&, const std::vector<int>&)>;

struct GameRound {
  std::vector<int> a, b;
  bool from_cut = true;
  DirectedMatching fwd, bwd;
  double phi = 0;        // entropy potential after this round
  double phi_gain = 0;   // increase over the previous round
};

struct GameResult {
  DiGraph w;
  std::vector<GameRound> rounds;
  Rat certified_psi;     // sparsity measured by the final certify call
  bool cert_verified = true;
  double min_cut_round_gain_per_n = 0;  // measured alpha over cut rounds
};

// Cut player loop of the game guarantee over the given vertex ids (W lives in the
// same id space, so component subgraphs can play directly). The matcher must
// return perfect matchings whose weights are positive multiples of
// weight_unit; violations raise contract_error. Exceeding the round cap
// raises verify_error.
GameResult play_game(const std::vector<int>& vertex_ids, const Rat& weight_unit,
                     const MatcherFn& matcher, const CutMatchOptions& opt = {});

// Matching player backed by exact flow on a host graph: routes a perfect
// integral matching through E_host(A, B).
MatcherFn host_flow_matcher(const DiGraph& host);

// Exact doubly-stochastic mass matrix for the entropy instrumentation.
class MassMatrix {
 public:
  explicit MassMatrix(int n);
  void apply_round(const DirectedMatching& fwd, const DirectedMatching& bwd);
  double entropy_bits() const;  // Phi = sum_u H(fwd row) + H(bwd column)
  bool doubly_stochastic() const;
  double row_entropy(int u) const;
  double col_entropy(int u) const;
  const Rat& at(int u, int v) const { return p_[u][v]; }

 private:
  int n_;
  std::vector<std::vector<Rat>> p_;
};

// Pick the out- or in-sparse half of a union of sparse
// cuts; the returned set has Psi_{G1}(S) <= 3*psi, re-verified on return.
struct UnionSparseResult {
  std::vector<int> set;
  Rat sparsity;
  bool out_side;
};

UnionSparseResult union_sparse_cuts(const DiGraph& g1,
                                    const std::vector<std::vector<int>>& cuts,
                                    const Rat& psi);

// Fact 3.2 static directed expander decomposition by recursive sparse
// vertex cuts.
struct StaticDecomposition {
  std::vector<int> removed;                 // R
  std::vector<std::vector<int>> blocks;     // X_i, each a phi-vertex-expander
  std::vector<int> topo_order;              // block indices in DAG order
};

StaticDecomposition static_decompose(const DiGraph& g, const Rat& phi,
                                     const ExpanderCheckOptions& opt = {});

}  // namespace dygx
