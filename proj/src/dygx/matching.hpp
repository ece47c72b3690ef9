#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "digraph.hpp"

namespace dygx {

// Maximum bipartite matching by Hopcroft-Karp over the alive L->R edges.
// max_phases < 0 runs to optimality; otherwise the result is the familiar
// (1 - 1/(phases+1))-style truncation used for (1-eps)-approximation.
int hopcroft_karp(const DiGraph& g, const std::vector<int>& left,
                  const std::vector<int>& right, int max_phases = -1);

struct MatchingOrCut {
  bool has_matching = false;
  std::vector<Rat> val;  // per edge slot
  Rat value;
  std::vector<int> s_l, s_r;
};

// MATCHING-OR-CUT: either a fractional matching of value at least
// mu(1-eps) obeying kappa, or cut sets with
// kappa(S_L, R \ S_R) + |S_R| <= mu + |S_L| - n (re-verified).
MatchingOrCut matching_or_cut(const DiGraph& g, const std::vector<int>& left,
                              const std::vector<int>& right,
                              const std::vector<Rat>& kappa, const Rat& mu,
                              const Rat& eps);

struct RobustMatchingStats {
  long phases = 0;
  long doublings = 0;
  Rat kappa_initial_total;
  Rat kappa_total;  // kappa(E_0) with deleted edges' capacities frozen
};

// ROBUST-MATCHING over a decremental bipartite graph.
class RobustMatching {
 public:
  // The observer fires with "pre-doubling" / "post-doubling" /
  // "phase-installed" events so potential oracles can snapshot capacities.
  using Observer = std::function<void(const char*)>;

  RobustMatching(const DiGraph& g0, std::vector<int> left,
                 std::vector<int> right, Rat mu, Rat eps,
                 Observer observer = {});

  bool alive() const { return !terminated_; }
  void delete_edge(int edge_id);

  const DiGraph& graph() const { return g_; }
  const std::vector<Rat>& matching() const { return val_; }
  Rat matching_value() const;
  const Rat& counter() const { return counter_; }
  const RobustMatchingStats& stats() const { return stats_; }
  const std::vector<Rat>& capacities() const { return kappa_; }
  const Rat& mu() const { return mu_; }
  const Int& n_pow2() const { return n2_; }
  const std::vector<int>& left() const { return left_; }
  const std::vector<int>& right() const { return right_; }

 private:
  void begin_phase();
  bool matching_too_small() const;

  DiGraph g_;
  std::vector<int> left_, right_;
  Rat mu_, eps_;
  Observer observer_;
  Int n2_;
  std::vector<Rat> kappa_;
  std::vector<Rat> val_;
  Rat counter_ = 0;
  bool terminated_ = false;
  RobustMatchingStats stats_;
};

// Section A.2 top-level loop: mu* halving over ROBUST-MATCHING instances.
class DecrementalMatching {
 public:
  DecrementalMatching(const DiGraph& g0, std::vector<int> left,
                      std::vector<int> right, Rat eps);

  void delete_edge(int edge_id);
  Rat matching_value() const;
  const std::vector<Rat>& matching() const;
  const Rat& mu_star() const { return mu_star_; }
  bool exhausted() const { return !inner_.has_value(); }
  long restarts() const { return restarts_; }

 private:
  void ensure_alive();

  DiGraph g_;
  std::vector<int> left_, right_;
  Rat eps_;
  Rat mu_star_;
  std::optional<RobustMatching> inner_;
  std::vector<Rat> empty_;
  long restarts_ = 0;
};

// Definition 5.5 brute-force potential oracle for small instances: the
// minimum cost sum over integral matchings of size >= (1-2eps)*mu, with
// c(e) = log2(n * kappa(e)); nullopt encodes infinity.
std::optional<Int> potential_oracle(const DiGraph& g,
                                    const std::vector<int>& left,
                                    const std::vector<int>& right,
                                    const std::vector<Rat>& kappa,
                                    const Int& n_pow2, const Rat& mu,
                                    const Rat& eps);

}  // namespace dygx
