#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cutmatch.hpp"
#include "pruning.hpp"
#include "witness.hpp"

namespace dygx {

// TERMINAL-MATCHING: a perfect integral matching A -> B embedded
// into an expander with bounded edge congestion and length, found by
// repeated global-flow rounds. Raises contract_error when the expander
// promise is broken (the flow starves).
struct TerminalMatchingResult {
  std::vector<std::pair<int, int>> matching;
  std::vector<EmbeddedPath> embedding;  // one path per matched pair
  Rat congestion_bound;                 // rounds * ceil(2/phi)
  Int length_bound;                     // 2h
};

TerminalMatchingResult terminal_matching(const DiGraph& g,
                                         const std::vector<int>& a,
                                         const std::vector<int>& b,
                                         const Rat& phi);

// TERMINAL-WITNESS: an edge-witness on V(W) = T via the
// cut-matching game with terminal_matching as the matching player.
Witness terminal_witness(const DiGraph& g, const std::vector<int>& terminals,
                         const Rat& phi, const CutMatchOptions& opt = {});

struct PathOracleOptions {
  int levels = 1;             // q
  int level_param = 0;        // pruning L; 0 = gamma chooser
  int verify_threshold = 12;  // exhaustive conductance measurements
  CutMatchOptions game;
};

// PATH-INSIDE-EXPANDER with q levels. Batches must obey the
// promise that the remaining graph stays an expander; queries return
// simple paths within the current (unpruned) edge set.
class PathOracle {
 public:
  PathOracle(const DiGraph& w, const Rat& phi, PathOracleOptions opt = {});
  ~PathOracle();
  PathOracle(PathOracle&&) noexcept;
  PathOracle& operator=(PathOracle&&) noexcept;

  // Deletes a batch of edges and vertices (vertex deletion drops all its
  // incident edges).
  void delete_batch(const std::vector<int>& edges,
                    const std::vector<int>& vertices);

  struct Query {
    std::vector<int> forward;   // simple u -> v vertex sequence
    std::vector<int> backward;  // simple v -> u vertex sequence
  };
  Query query(int u, int v);

  bool usable(int v) const;
  const DiGraph& current() const;
  Rat pruned_volume() const;
  long steps() const { return steps_; }  // instrumentation counter

 private:
  struct Level;
  void grow_level(int idx);
  std::vector<int> query_level(int idx, int u, int v);
  void delete_in_level(int idx, const std::vector<int>& edges);
  std::vector<int> simple_extract(const std::vector<int>& walk) const;

  DiGraph w0_;
  Rat phi_;
  PathOracleOptions opt_;
  std::vector<std::unique_ptr<Level>> levels_;  // levels_[0] = level q (top)
  std::vector<char> removed_;
  long steps_ = 0;
};

}  // namespace dygx
