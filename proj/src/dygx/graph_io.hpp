#pragma once

#include <iosfwd>
#include <string>

#include "digraph.hpp"

namespace dygx {

// Graph text format: first line `n m d`, then m lines `u v w_num` meaning an
// edge (u, v) of weight w_num/d. Unweighted graphs use d=1, w_num=1.
struct LoadedGraph {
  DiGraph graph;
  Int denominator = 1;
};

LoadedGraph parse_graph(std::istream& in);
LoadedGraph parse_graph_text(const std::string& text);
LoadedGraph load_graph_file(const std::string& path);
std::string format_graph(const DiGraph& g, const Int& d);

// Small constructions used across tests and the harness.
DiGraph directed_cycle(int n);
DiGraph directed_path(int n);
DiGraph bidirected_clique(int n);
DiGraph bidirected_cycle(int n);

}  // namespace dygx
