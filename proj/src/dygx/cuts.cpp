#include "cuts.hpp"

#include <algorithm>
#include <random>

namespace dygx {

EdgeCutView cut_measures(const DiGraph& g, const std::vector<int>& s) {
  std::vector<char> in_s(g.vertex_slots(), 0);
  int alive_in_s = 0;
  for (int v : s) {
    if (v < 0 || v >= g.vertex_slots() || !g.vertex_alive(v))
      throw input_error("cut_measures: S contains a missing vertex");
    if (!in_s[v]) ++alive_in_s;
    in_s[v] = 1;
  }
  if (alive_in_s == 0 || alive_in_s == g.num_vertices())
    throw input_error("cut_measures: S must be a proper nonempty subset");
  EdgeCutView view;
  view.side = s;
  view.delta_out = 0;
  view.delta_in = 0;
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    bool t = in_s[ed.tail], h = in_s[ed.head];
    if (t && !h) view.delta_out += ed.w;
    if (!t && h) view.delta_in += ed.w;
  }
  view.vol_s = g.volume(s);
  return view;
}

bool verify_vertex_cut(const DiGraph& g, const VertexCutView& cut) {
  std::vector<int> tag(g.vertex_slots(), -1);
  for (int v : cut.left) tag[v] = 0;
  for (int v : cut.sep) tag[v] = 1;
  for (int v : cut.right) tag[v] = 2;
  int covered = 0;
  for (int v : g.vertices()) {
    if (tag[v] < 0) return false;
    ++covered;
  }
  if (covered !=
      static_cast<int>(cut.left.size() + cut.sep.size() + cut.right.size()))
    return false;
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    int a = tag[ed.tail], b = tag[ed.head];
    if (cut.direction == CutDirection::lr_empty && a == 0 && b == 2) return false;
    if (cut.direction == CutDirection::rl_empty && a == 2 && b == 0) return false;
  }
  return true;
}

namespace {

// Subset enumeration helper: compute both direction cut weights for the subset
// encoded by mask over `verts`.
EdgeCutView mask_cut(const DiGraph& g, const std::vector<int>& verts,
                     unsigned long mask) {
  std::vector<int> s;
  for (size_t i = 0; i < verts.size(); ++i)
    if (mask >> i & 1) s.push_back(verts[i]);
  return cut_measures(g, s);
}

}  // namespace

ExpanderCheck check_expander(const DiGraph& g, const Rat& phi,
                             const ExpanderCheckOptions& opt) {
  ExpanderCheck res;
  int n = g.num_vertices();
  if (n <= 1) {
    res.certified = true;  // an isolated vertex is an expander
    res.exhaustive = true;
    return res;
  }
  std::vector<int> verts = g.vertices();
  Rat total = g.total_volume();
  if (n <= opt.exhaustive_threshold) {
    res.exhaustive = true;
    unsigned long lim = 1ul << n;
    for (unsigned long mask = 1; mask + 1 < lim; ++mask) {
      EdgeCutView c = mask_cut(g, verts, mask);
      if (2 * c.vol_s > total) continue;  // cuts take the smaller-volume side
      if (c.sparse(phi)) {
        res.witness_cut = std::move(c);
        return res;
      }
    }
    res.certified = true;
    return res;
  }
  if (!opt.allow_sampling)
    throw input_error("check_expander: size over exhaustive threshold");
  res.exhaustive = false;
  std::mt19937_64 rng(opt.seed);
  for (int it = 0; it < opt.sample_count; ++it) {
    std::vector<int> s;
    for (int v : verts)
      if (rng() & 1) s.push_back(v);
    if (s.empty() || static_cast<int>(s.size()) == n) continue;
    EdgeCutView c = cut_measures(g, s);
    if (2 * c.vol_s > total) continue;
    if (c.sparse(phi)) {
      res.witness_cut = std::move(c);
      return res;
    }
  }
  res.certified = true;  // unverified
  return res;
}

VertexExpanderCheck check_vertex_expander(const DiGraph& g, const Rat& phi,
                                          const ExpanderCheckOptions& opt) {
  VertexExpanderCheck res;
  int n = g.num_vertices();
  if (n <= 1) {
    res.certified = true;
    res.exhaustive = true;
    return res;
  }
  if (n > opt.vertex_threshold)
    throw input_error("check_vertex_expander: size over exhaustive threshold");
  res.exhaustive = true;
  std::vector<int> verts = g.vertices();
  // Trits: 0 -> L, 1 -> S, 2 -> R.
  std::vector<int> tag(n, 0);
  std::vector<int> vslot(g.vertex_slots(), -1);
  for (int i = 0; i < n; ++i) vslot[verts[i]] = i;
  unsigned long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (unsigned long code = 0; code < total; ++code) {
    unsigned long c = code;
    for (int i = 0; i < n; ++i) {
      tag[i] = static_cast<int>(c % 3);
      c /= 3;
    }
    VertexCutView cut;
    for (int i = 0; i < n; ++i) {
      if (tag[i] == 0) cut.left.push_back(verts[i]);
      if (tag[i] == 1) cut.sep.push_back(verts[i]);
      if (tag[i] == 2) cut.right.push_back(verts[i]);
    }
    if (cut.left.empty() || cut.right.empty()) continue;
    if (cut.left.size() > cut.right.size()) continue;  // normalized |L| <= |R|
    bool lr = true, rl = true;
    for (int e : g.edges()) {
      const Edge& ed = g.edge(e);
      int a = tag[vslot[ed.tail]], b = tag[vslot[ed.head]];
      if (a == 0 && b == 2) lr = false;
      if (a == 2 && b == 0) rl = false;
      if (!lr && !rl) break;
    }
    if (!lr && !rl) continue;
    if (!(Rat(cut.sep.size()) < phi * Rat(cut.left.size()))) continue;
    cut.direction = lr ? CutDirection::lr_empty : CutDirection::rl_empty;
    res.witness_cut = std::move(cut);
    return res;
  }
  res.certified = true;
  return res;
}

NearExpanderCheck check_near_expander(const DiGraph& g,
                                      const std::vector<int>& a, const Rat& phi,
                                      int exhaustive_threshold) {
  NearExpanderCheck res;
  if (a.size() > static_cast<size_t>(exhaustive_threshold))
    throw input_error("check_near_expander: |A| over exhaustive threshold");
  if (a.empty()) {
    res.certified = true;
    return res;
  }
  Rat vol_a = g.volume(a);
  DiGraph rev = g.reversed();
  unsigned long lim = 1ul << a.size();
  for (unsigned long mask = 1; mask < lim; ++mask) {
    std::vector<int> s;
    for (size_t i = 0; i < a.size(); ++i)
      if (mask >> i & 1) s.push_back(a[i]);
    Rat vol_s = g.volume(s);
    if (2 * vol_s > vol_a) continue;
    if (vol_s == 0) continue;
    if (static_cast<int>(s.size()) == g.num_vertices()) continue;
    EdgeCutView c = cut_measures(g, s);
    if (c.delta_out < phi * vol_s) {
      res.violating_set = s;
      res.out_direction = true;
      return res;
    }
    EdgeCutView cr = cut_measures(rev, s);
    if (cr.delta_out < phi * vol_s) {
      res.violating_set = s;
      res.out_direction = false;
      return res;
    }
  }
  res.certified = true;
  return res;
}

Rat cut_sparsity(const DiGraph& g, const std::vector<int>& s) {
  EdgeCutView c = cut_measures(g, s);
  size_t small = std::min(s.size(), static_cast<size_t>(g.num_vertices()) - s.size());
  return c.min_delta() / Rat(small);
}

SparsityResult graph_sparsity(const DiGraph& g, int exhaustive_threshold) {
  int n = g.num_vertices();
  if (n > exhaustive_threshold)
    throw input_error("graph_sparsity: size over exhaustive threshold");
  SparsityResult res;
  if (n < 2) {
    res.psi = Rat(Int(1) << 30);
    return res;
  }
  std::vector<int> verts = g.vertices();
  bool first = true;
  unsigned long lim = 1ul << n;
  for (unsigned long mask = 1; mask + 1 < lim; ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(verts[i]);
    if (2 * s.size() > static_cast<size_t>(n)) continue;  // |S| <= |V\S|
    EdgeCutView c = cut_measures(g, s);
    Rat psi = c.min_delta() / Rat(s.size());
    if (first || psi < res.psi) {
      res.psi = psi;
      res.argmin_set = std::move(s);
      first = false;
    }
  }
  return res;
}

Rat measured_edge_expansion(const DiGraph& g, int exhaustive_threshold) {
  if (g.num_vertices() <= 1) return Rat(1, 2);
  if (g.num_vertices() > exhaustive_threshold) return Rat(1, 16);
  Rat best = -1;
  std::vector<int> verts = g.vertices();
  int n = static_cast<int>(verts.size());
  Rat total = g.total_volume();
  unsigned long lim = 1ul << n;
  for (unsigned long mask = 1; mask + 1 < lim; ++mask) {
    std::vector<int> side;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) side.push_back(verts[i]);
    EdgeCutView c = cut_measures(g, side);
    if (2 * c.vol_s > total || c.vol_s == 0) continue;
    Rat ratio = c.min_delta() / c.vol_s;
    if (best < 0 || ratio < best) best = ratio;
  }
  if (best <= 0) return Rat(0);
  if (best > Rat(1, 2)) best = Rat(1, 2);
  return best;
}

}  // namespace dygx
