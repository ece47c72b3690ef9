#pragma once

#include <optional>
#include <vector>

#include "estree.hpp"

namespace dygx {

// FOREST-FROM-WITNESS: two truncated ES-trees on G_s (the graph
// with a helper root joined to every witness vertex) maintain an out-forest
// and an in-forest over the current vertex set. Vertices falling out of
// range are cut off with a balanced separator and removed from G.
class WitnessForest {
 public:
  struct CutEvent {
    std::vector<int> left;  // removed interior, contains the failing vertex
    std::vector<int> sep;   // removed separator layer
    bool from_out_tree;     // which tree triggered it
  };

  WitnessForest(const DiGraph& g, const std::vector<int>& witness,
                const Rat& phi);

  std::vector<CutEvent> delete_edge(int edge_id);
  std::vector<CutEvent> remove_from_witness(int v);

  bool contains(int v) const;
  long depth_cap() const { return cap_; }
  int out_root(int v) const;
  int in_root(int v) const;
  // P_1 piece: v -> root in the in-forest; P_k piece: root -> v in the
  // out-forest. Both include endpoints.
  std::vector<int> path_to_in_root(int v) const;
  std::vector<int> path_from_out_root(int v) const;
  long out_depth(int v) const;
  long in_depth(int v) const;
  std::vector<int> current_vertices() const;
  int witness_size() const { return witness_count_; }

 private:
  std::vector<CutEvent> process_fallen(std::vector<int> fallen_out,
                                       std::vector<int> fallen_in);

  int helper_ = -1;
  long cap_ = 0;
  std::optional<ESTree> out_tree_, in_tree_;
  std::vector<char> present_;
  std::vector<char> in_witness_;
  int witness_count_ = 0;
};

}  // namespace dygx
