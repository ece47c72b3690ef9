#pragma once

#include <vector>

#include "num.hpp"

namespace dygx {

// Directed weighted multigraph with stable dense vertex ids. Deletion
// tombstones edges and vertices instead of renumbering, so embeddings and
// traces keep referring to the same ids across updates.
struct Edge {
  int tail = -1;
  int head = -1;
  Rat w;
  bool alive = false;
};

class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(int n) { reset(n); }

  void reset(int n);
  int add_vertex();
  int add_edge(int u, int v, Rat w);
  void delete_edge(int eid);
  void delete_vertex(int v);  // tombstones v and its incident edges

  int vertex_slots() const { return static_cast<int>(vertex_alive_.size()); }
  int edge_slots() const { return static_cast<int>(edges_.size()); }
  bool vertex_alive(int v) const { return vertex_alive_[v]; }
  bool edge_alive(int e) const { return edges_[e].alive; }
  const Edge& edge(int e) const { return edges_[e]; }
  int num_vertices() const { return alive_vertices_; }
  int num_edges() const { return alive_edges_; }

  // Alive incident edge ids. The underlying lists are compacted lazily.
  std::vector<int> out_edges(int v) const { return live(out_[v]); }
  std::vector<int> in_edges(int v) const { return live(in_[v]); }
  const std::vector<int>& out_raw(int v) const { return out_[v]; }
  const std::vector<int>& in_raw(int v) const { return in_[v]; }

  std::vector<int> vertices() const;
  std::vector<int> edges() const;

  // Finds some alive edge u->v, or -1.
  int find_edge(int u, int v) const;

  const Rat& deg_out(int v) const { return deg_out_[v]; }
  const Rat& deg_in(int v) const { return deg_in_[v]; }
  Rat deg(int v) const { return deg_out_[v] + deg_in_[v]; }

  Rat volume(const std::vector<int>& S) const;
  Rat total_volume() const;
  Rat total_weight() const;

  DiGraph reversed() const;
  // Copy with every vertex outside S tombstoned (ids preserved).
  DiGraph induced(const std::vector<int>& S) const;
  DiGraph copy() const { return *this; }

  // Unweighted degree counts (parallel edges counted with multiplicity).
  int udeg_out(int v) const { return ucount(out_[v]); }
  int udeg_in(int v) const { return ucount(in_[v]); }

 private:
  std::vector<int> live(const std::vector<int>& ids) const;
  int ucount(const std::vector<int>& ids) const;

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<char> vertex_alive_;
  std::vector<Rat> deg_out_, deg_in_;
  int alive_vertices_ = 0;
  int alive_edges_ = 0;
};

}  // namespace dygx
