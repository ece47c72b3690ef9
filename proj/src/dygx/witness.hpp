#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "cutmatch.hpp"
#include "cuts.hpp"
#include "digraph.hpp"
#include "pruning.hpp"

namespace dygx {

// A valued simple path in the host graph realizing one witness edge.
struct EmbeddedPath {
  std::vector<int> vertices;
  std::vector<int> edge_ids;  // host edge ids
  Rat val;
  int witness_edge = -1;
  std::unordered_map<int, int> position;  // vertex -> index (per-path membership sets)

  void index_vertices();
};

struct Embedding {
  std::vector<EmbeddedPath> paths;

  Rat vertex_congestion(int v) const;
  Rat edge_load(int host_edge) const;
};

struct Witness {
  DiGraph w;  // weighted witness graph in the host id space
  Embedding embedding;
  Rat certified_psi;  // measured game sparsity of W*
  bool verified = true;
  Rat weight_unit;  // every weight is a positive multiple of this
};

struct WitnessOptions {
  CutMatchOptions game;
  int verify_threshold = 12;  // exhaustive audits up to this size
  // Quality constants the paper leaves as n^{o(1)}; logged per run.
  std::optional<Rat> eps_wit;   // default 1/(4 ceil_log2(n)^2)
  std::optional<Rat> alpha_ex;  // default derived from the measured game psi
  int round_estimate_factor = 4;
};

// EMBED-MATCHING: a path collection A -> B obeying both the edge
// capacities kappa and vertex capacity 1/phi, or the bottleneck partition.
struct EmbedMatchingResult {
  bool has_paths = false;
  std::vector<EmbeddedPath> paths;
  std::vector<int> left, sep, right;  // kappa(E(L,R)) + |S|/(2phi) <= |L| - eps*n
  Rat cut_lhs, cut_rhs;
};

EmbedMatchingResult embed_matching(const DiGraph& g,
                                   const std::vector<Rat>& kappa,
                                   const std::vector<int>& a,
                                   const std::vector<int>& b, const Rat& phi,
                                   const Rat& eps, const Rat& d);

// EMBED-WITNESS via the cut-matching game with embed_matching as
// the matching player; prunes the fake matchings away.
struct EmbedWitnessResult {
  bool has_witness = false;
  Witness witness;
  std::vector<int> left, sep, right;
  Rat cut_lhs, cut_rhs;  // kappa(E(L,R)) + |S|/(2phi) <= |L|
};

EmbedWitnessResult embed_witness(const DiGraph& g, const std::vector<Rat>& kappa,
                                 const Rat& phi, const Rat& d,
                                 const WitnessOptions& opt = {});

// CERTIFY-WITNESS via vertex_congested_matching as the player.
struct CertifyResult {
  bool certified = false;
  std::optional<VertexCutView> cut;
  // When certified, the constructed witness (the algorithm only needs the
  // existence, but tests inspect it).
  std::optional<Witness> witness;
};

CertifyResult certify_witness(const DiGraph& g, const Rat& phi, const Rat& eps,
                              const WitnessOptions& opt = {});

struct WitnessChangeReport {
  std::vector<int> removed_witness_edges;
  std::vector<int> pruned_vertices;
  bool phase_reset = false;
  bool terminated = false;
};

struct RobustWitnessStats {
  long phases = 0;
  long doublings = 0;
  Rat kappa_total;  // kappa(E_0), deleted edges frozen
  std::vector<Int> reset_indices;
};

// ROBUST-WITNESS phase machine.
class RobustWitness {
 public:
  RobustWitness(const DiGraph& g0, const Rat& phi, WitnessOptions opt = {});

  bool alive() const { return !terminated_; }
  const std::optional<VertexCutView>& termination_cut() const { return cut_; }
  WitnessChangeReport delete_edge(int edge_id);

  const Witness& witness() const { return witness_; }
  const DiGraph& graph() const { return g_; }
  const std::vector<Rat>& capacities() const { return kappa_; }
  const Rat& phi_prime() const { return phi_prime_; }
  const Rat& weight_unit() const { return unit_; }
  const RobustWitnessStats& stats() const { return stats_; }
  const Rat& counter() const { return counter_; }
  Int updates() const { return updates_; }

 private:
  void begin_phase();
  void install(Witness w);

  DiGraph g_;
  Rat phi_, phi_prime_, unit_;  // unit = 1/d
  WitnessOptions opt_;
  std::vector<Rat> kappa_;
  bool terminated_ = false;
  std::optional<VertexCutView> cut_;
  Witness witness_;
  DiGraph witness_at_install_;
  std::optional<PruneState> prune_;
  // Unit multigraph bookkeeping: per witness edge, its block of unit edges.
  std::vector<std::vector<int>> unit_edges_of_;
  std::vector<std::vector<int>> paths_through_;  // host edge -> path indices
  Rat counter_ = 0;
  Int updates_ = 0;
  RobustWitnessStats stats_;
  int n0_ = 0;
};

}  // namespace dygx
