#include "digraph.hpp"

#include <algorithm>

namespace dygx {

void DiGraph::reset(int n) {
  edges_.clear();
  out_.assign(n, {});
  in_.assign(n, {});
  vertex_alive_.assign(n, 1);
  deg_out_.assign(n, Rat(0));
  deg_in_.assign(n, Rat(0));
  alive_vertices_ = n;
  alive_edges_ = 0;
}

int DiGraph::add_vertex() {
  out_.emplace_back();
  in_.emplace_back();
  vertex_alive_.push_back(1);
  deg_out_.emplace_back(0);
  deg_in_.emplace_back(0);
  ++alive_vertices_;
  return static_cast<int>(vertex_alive_.size()) - 1;
}

int DiGraph::add_edge(int u, int v, Rat w) {
  if (u < 0 || v < 0 || u >= vertex_slots() || v >= vertex_slots() ||
      !vertex_alive_[u] || !vertex_alive_[v])
    throw input_error("add_edge: bad endpoint");
  if (w < 0) throw input_error("add_edge: negative weight");
  int id = static_cast<int>(edges_.size());
  edges_.push_back({u, v, w, true});
  out_[u].push_back(id);
  in_[v].push_back(id);
  deg_out_[u] += w;
  deg_in_[v] += w;
  ++alive_edges_;
  return id;
}

void DiGraph::delete_edge(int eid) {
  if (eid < 0 || eid >= edge_slots() || !edges_[eid].alive)
    throw input_error("delete_edge: edge not present");
  Edge& e = edges_[eid];
  e.alive = false;
  deg_out_[e.tail] -= e.w;
  deg_in_[e.head] -= e.w;
  --alive_edges_;
}

void DiGraph::delete_vertex(int v) {
  if (v < 0 || v >= vertex_slots() || !vertex_alive_[v])
    throw input_error("delete_vertex: vertex not present");
  for (int e : out_[v])
    if (edges_[e].alive) delete_edge(e);
  for (int e : in_[v])
    if (edges_[e].alive) delete_edge(e);
  vertex_alive_[v] = 0;
  --alive_vertices_;
}

std::vector<int> DiGraph::vertices() const {
  std::vector<int> vs;
  vs.reserve(alive_vertices_);
  for (int v = 0; v < vertex_slots(); ++v)
    if (vertex_alive_[v]) vs.push_back(v);
  return vs;
}

std::vector<int> DiGraph::edges() const {
  std::vector<int> es;
  es.reserve(alive_edges_);
  for (int e = 0; e < edge_slots(); ++e)
    if (edges_[e].alive) es.push_back(e);
  return es;
}

int DiGraph::find_edge(int u, int v) const {
  for (int e : out_[u])
    if (edges_[e].alive && edges_[e].head == v) return e;
  return -1;
}

Rat DiGraph::volume(const std::vector<int>& S) const {
  Rat vol = 0;
  for (int v : S)
    if (vertex_alive_[v]) vol += deg(v);
  return vol;
}

Rat DiGraph::total_volume() const {
  Rat vol = 0;
  for (int v = 0; v < vertex_slots(); ++v)
    if (vertex_alive_[v]) vol += deg(v);
  return vol;
}

Rat DiGraph::total_weight() const {
  Rat w = 0;
  for (const Edge& e : edges_)
    if (e.alive) w += e.w;
  return w;
}

DiGraph DiGraph::reversed() const {
  DiGraph r;
  r.edges_.reserve(edges_.size());
  r.out_ = in_;
  r.in_ = out_;
  r.vertex_alive_ = vertex_alive_;
  r.deg_out_ = deg_in_;
  r.deg_in_ = deg_out_;
  r.alive_vertices_ = alive_vertices_;
  r.alive_edges_ = alive_edges_;
  for (const Edge& e : edges_) r.edges_.push_back({e.head, e.tail, e.w, e.alive});
  return r;
}

DiGraph DiGraph::induced(const std::vector<int>& S) const {
  std::vector<char> keep(vertex_slots(), 0);
  for (int v : S)
    if (v >= 0 && v < vertex_slots() && vertex_alive_[v]) keep[v] = 1;
  DiGraph g = *this;
  for (int v = 0; v < vertex_slots(); ++v)
    if (vertex_alive_[v] && !keep[v]) g.delete_vertex(v);
  return g;
}

std::vector<int> DiGraph::live(const std::vector<int>& ids) const {
  std::vector<int> r;
  r.reserve(ids.size());
  for (int e : ids)
    if (edges_[e].alive) r.push_back(e);
  return r;
}

int DiGraph::ucount(const std::vector<int>& ids) const {
  int c = 0;
  for (int e : ids)
    if (edges_[e].alive) ++c;
  return c;
}

}  // namespace dygx
