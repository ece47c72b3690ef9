#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cuts.hpp"
#include "digraph.hpp"

namespace dygx {

// gamma_L(phi) = (phi/96)^{3^{L_max}} with L_max = 2L+2, evaluated exactly.
Rat gamma_value(int level_param, const Rat& phi);
Rat phi_level(int level_param, const Rat& phi, int level);

// levelchooser for the pruning ladder: L = max(1, round(log3(log_{1/phi}(n)) / (2c))) with
// c = 2, the exponent constant of this implementation's ladder.
int choose_level_param(const Int& n, const Rat& phi);

struct OneShotOptions {
  // Exhaustively confirm the near-expander precondition / postcondition when
  // the core is at most this large (0 disables the check).
  int verify_threshold = 0;
  bool enforce_boundary_bound = true;  // |B| <= phi*m/100
};

struct OneShotResult {
  bool kept_boundary_arm = false;
  std::vector<int> kept_boundary;  // B' as input edge ids, |B'| <= 2z
  std::vector<int> cut;            // P' subset of the core otherwise
  bool cut_out_sparse = true;      // which direction attained the bound
  Rat cut_volume;                  // vol_W(P')
};

// One-shot pruning. `boundary` is the vertex set P; every edge must
// either join two core vertices or touch the boundary. Requires 4/phi and
// 24/phi^2 integral (the ladder built by PruneState guarantees this).
OneShotResult one_shot_prune(const DiGraph& w, const std::vector<int>& boundary,
                             const Rat& phi, const Int& z,
                             const OneShotOptions& opt = {});

struct PruneOptions {
  int level_param = 1;  // L
  bool prose_z = false;  // use z = n^{l/L}/8 - 1 instead of the pseudocode's
  bool check_invariants = true;
  // Cut search inside DELETEPRUNING falls back to exhaustive enumeration when
  // the flow preconditions fail and the core is at most this large.
  int exhaustive_threshold = 16;
};

struct PruneDiagnostics {
  Int updates = 0;
  long one_shot_flow_calls = 0;
  long fallback_calls = 0;
  long cuts_taken = 0;
  Rat max_volume_ratio = 0;  // measured C in vol(P) <= C * t * n^{1/L} / gamma
  long unverified_keeps = 0;  // keep arms taken heuristically at large n
};

// Dynamic directed expander pruning (the level-merging deletion procedure) over an
// unweighted multigraph. The caller feeds single edge deletions; the state
// maintains the incremental pruned set P with the per-level bookkeeping.
class PruneState {
 public:
  PruneState(const DiGraph& w0, const Rat& phi, PruneOptions opt = {});

  // Processes one deletion; returns the newly pruned vertices.
  std::vector<int> delete_edge(int edge_id);

  const DiGraph& current() const { return w_; }
  const DiGraph& initial() const { return w0_; }
  std::vector<int> pruned() const;
  std::vector<int> core() const;
  Rat gamma() const { return phi_ladder_[0]; }
  Rat level_phi(int l) const { return phi_ladder_[l]; }
  int max_level() const { return lmax_; }
  Rat pruned_volume_initial() const;  // vol_{W0}(P)
  const PruneDiagnostics& diagnostics() const { return diag_; }

  // structural invariant checks (partition, boundary sizes, level volumes); returns violation messages.
  std::vector<std::string> check_invariants() const;

 private:
  struct Level {
    std::vector<int> p_out, p_in;  // explicit out/in partition
    std::set<int> b_edges, d_edges;
  };

  std::vector<int> core_at(int level) const;  // V \ P_{>= level}
  void run_level(int level);
  void apply_cut_at_level(int level, const std::vector<int>& cut);
  std::optional<std::vector<int>> heuristic_cut(
      int level, const std::vector<int>& core,
      const std::vector<long>& arcs_out, const std::vector<long>& arcs_in) const;
  Int z_for_level(int level) const;
  Int np(int i) const;  // ceil(n^{i/L})

  DiGraph w0_, w_;
  Rat phi_;
  PruneOptions opt_;
  int lmax_;
  std::vector<Rat> phi_ladder_;
  std::vector<Level> levels_;
  Int t_ = 0;
  Int n_;
  PruneDiagnostics diag_;
  std::vector<int> newly_pruned_;
};

}  // namespace dygx
