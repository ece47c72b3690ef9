#pragma once

#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "condensation.hpp"
#include "forest.hpp"
#include "path_oracle.hpp"
#include "witness.hpp"

namespace dygx {

struct SccOracleOptions {
  std::optional<Rat> phi_star;  // default 1 / ceil(n^{1/3})
  int oracle_levels = 1;        // q for PATH-INSIDE-EXPANDER
  WitnessOptions witness;
  int verify_threshold = 12;
  // |S^| is capped at separator_cap_constant * n * phi*; exceeding it is a
  // fail-stop because the separator accounting no longer holds.
  long separator_cap_constant = 64;
};

// Piece splice: walk the concatenated pieces, always jumping to the
// latest piece containing the current vertex so cycles are skipped without
// being traversed. Pieces are inclusive vertex lists; consecutive pieces
// share their junction vertex. Returns the simple path and counts the
// elementary steps (membership probes, advances, and piece sizes are charged
// by the caller).
struct SplicePiece {
  const std::vector<int>* verts;
  const std::unordered_map<int, int>* pos;
};

struct SpliceResult {
  std::vector<int> vertices;
  long steps = 0;
};

SpliceResult splice_simple_path(const std::vector<SplicePiece>& pieces, int u,
                               int v);

struct OracleStats {
  long witness_terminations = 0;
  long phase_resets = 0;
  long forest_cuts = 0;
  long component_splits = 0;
  long eager_extra_splits = 0;  // a cut part further split by Tarjan
  long queries = 0;
  size_t max_separator = 0;
};

// The decremental SCC oracle over the master graph G*.
class SccOracle {
 public:
  explicit SccOracle(const DiGraph& g, SccOracleOptions opt = {});

  void delete_edge(int edge_id);
  bool same_scc(int u, int v) const;

  struct PathResult {
    bool connected = false;
    std::vector<int> vertices;  // simple u -> v path
    long steps = 0;             // elementary-step counter (query work)
    long pieces = 0;            // k, number of concatenated pieces
  };
  PathResult query_path(int u, int v);

  const DiGraph& graph() const { return g_; }
  const std::vector<int>& separators() const { return separators_; }
  const Rat& phi_star() const { return phi_star_; }
  // Component id per vertex (-1 for separator vertices); ids are arbitrary
  // but equal exactly for vertices in one SCC of G* minus the separators.
  const std::vector<int>& component_of() const { return comp_of_; }
  const OracleStats& stats() const { return stats_; }
  // Forest inspection for the acceptance audits.
  struct ForestView {
    const WitnessForest* forest;
    std::vector<int> members;
  };
  std::vector<ForestView> forests() const;

 private:
  struct Component {
    std::vector<int> vertices;
    bool trivial = true;
    std::optional<RobustWitness> rw;
    std::optional<PathOracle> po;
    std::optional<WitnessForest> forest;
    DiGraph wu;                   // unit multigraph of the installed witness
    std::vector<int> unit_owner;  // wu edge -> witness edge
    std::map<int, std::vector<int>> units_of;  // witness edge -> wu edges
    std::map<int, int> path_of_witness_edge;   // witness edge -> embedding idx
  };

  void build_components(const std::vector<int>& vertices);
  int create_component(std::vector<int> vertices);
  void install_phase(Component& c);
  void add_separators(const std::vector<int>& sep);
  void handle_witness_report(int comp_id, const WitnessChangeReport& rep);
  void process_forest_events(int comp_id,
                             std::vector<WitnessForest::CutEvent> events);
  PathResult component_path(int comp_id, int u, int v);
  std::vector<int> base_path(int u, int v);

  DiGraph g_;
  SccOracleOptions opt_;
  Rat phi_star_;
  std::vector<int> comp_of_;
  std::map<int, Component> components_;
  int next_comp_ = 0;
  std::vector<int> separators_;
  std::unique_ptr<LackiStack> stack_;
  OracleStats stats_;
};

// Single-source reachability wrapper: adds (v, s) for every v, so s ~ v
// strong connectivity in the augmented graph is exactly s -> v reachability.
class ReachabilityOracle {
 public:
  ReachabilityOracle(const DiGraph& g, int source, SccOracleOptions opt = {});
  void delete_edge(int edge_id);  // ids of the original graph
  bool reachable(int v) const;
  SccOracle::PathResult path_to(int v);

 private:
  int source_;
  std::optional<SccOracle> inner_;
};

}  // namespace dygx
