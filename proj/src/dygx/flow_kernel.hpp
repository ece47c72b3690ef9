#pragma once

#include <string>
#include <vector>

#include "digraph.hpp"

namespace dygx {

// Flow problem (Delta, T, c) on a DiGraph, indexed by its vertex/edge slots.
// Capacities may be marked infinite (used by the vertex-splitting reduction).
struct FlowProblem {
  std::vector<Rat> delta;
  std::vector<Rat> sink;
  std::vector<Rat> cap;
  std::vector<char> cap_inf;
  // Every value is a nonnegative multiple of this (1/d in the paper's terms).
  Rat unit = 1;

  static FlowProblem zeros(const DiGraph& g, Rat unit = Rat(1));
  Rat total_delta() const;
  Rat total_sink() const;
  Rat total_cap() const;  // infinite-capacity edges excluded
};

// Bounded-height preflow plus labels. Labels are derived from residual BFS
// distances: label(v) = h - dist(v) + 1 when dist(v) <= h, else 0, so h may
// be astronomically large without storing per-vertex big integers.
struct Preflow {
  Int height;
  std::vector<Rat> flow;     // per edge slot
  std::vector<long> dist;    // residual distance from the super source; -1 = inf
  std::vector<Rat> mass;     // f(v) = Delta(v) + f(V,v) - f(v,V)
  std::vector<Rat> absorbed; // min(f(v), T(v))
  std::vector<Rat> excess;   // f(v) - absorbed(v)
  Rat total_excess;

  bool label_zero(int v) const { return dist[v] < 0 || Int(dist[v]) > height; }
  Int label(int v) const {
    return label_zero(v) ? Int(0) : height - dist[v] + 1;
  }
  // l(u) > l(v) + 1
  bool label_gap(int u, int v) const {
    if (label_zero(u)) return false;
    if (label_zero(v)) return height - dist[u] + 1 > 1;
    return dist[v] - dist[u] > 1;
  }
};

// Bounded-height preflow kernel: blocking-flow rounds on the super-source/super-sink
// graph until the residual s-t distance exceeds h+1. Positive flow cycles are
// cancelled before labeling so path decompositions are exact.
Preflow bounded_flow(const DiGraph& g, const FlowProblem& pi, const Int& h);

// Returns human-readable violations of the five preflow label invariants plus
// capacity/integrality checks; empty means the preflow checks out.
std::vector<std::string> check_preflow(const DiGraph& g, const FlowProblem& pi,
                                       const Preflow& pf);

struct FlowPath {
  std::vector<int> vertices;
  std::vector<int> edge_ids;
  Rat val;
};

struct PathDecomposition {
  std::vector<FlowPath> paths;
  Rat total_value() const;
  Rat weighted_length() const;  // sum val(P) * |P|
};

PathDecomposition decompose(const DiGraph& g, const Preflow& pf);

struct FeasibleFlow {
  std::vector<Rat> flow;
  Rat value;  // Delta(V) - ex_f(V)
};

// Dropping the leftover excess at the sources: the edge flow is
// already feasible for the reduced supply.
FeasibleFlow strip_excess(const DiGraph& g, const FlowProblem& pi,
                          const Preflow& pf);

// Nonempty label values in decreasing order (excluding the implicit 0 level),
// as residual distances in increasing order. Used by the level-cut searches.
std::vector<long> distinct_finite_dists(const Preflow& pf, const DiGraph& g);

}  // namespace dygx
