#include "flow_routines.hpp"

#include <algorithm>
#include <set>

namespace dygx {

Rat cap_volume(const DiGraph& g, const FlowProblem& pi,
               const std::vector<char>& in_s, bool inside) {
  Rat vol = 0;
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e) || pi.cap_inf[e]) continue;
    const Edge& ed = g.edge(e);
    if (in_s[ed.tail] == inside) vol += pi.cap[e];
    if (in_s[ed.head] == inside) vol += pi.cap[e];
  }
  return vol;
}

Rat cut_capacity_out(const DiGraph& g, const FlowProblem& pi,
                     const std::vector<char>& in_s) {
  Rat c = 0;
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    const Edge& ed = g.edge(e);
    if (in_s[ed.tail] && !in_s[ed.head]) {
      if (pi.cap_inf[e])
        throw verify_error("level cut crosses an infinite-capacity edge");
      c += pi.cap[e];
    }
  }
  return c;
}

namespace {

std::vector<char> prefix_mask(const DiGraph& g, const Preflow& pf, long dmax) {
  std::vector<char> in_s(g.vertex_slots(), 0);
  for (int v = 0; v < g.vertex_slots(); ++v)
    if (g.vertex_alive(v) && !pf.label_zero(v) && pf.dist[v] <= dmax)
      in_s[v] = 1;
  return in_s;
}

std::vector<int> mask_to_set(const DiGraph& g, const std::vector<char>& in_s) {
  std::vector<int> s;
  for (int v = 0; v < g.vertex_slots(); ++v)
    if (g.vertex_alive(v) && in_s[v]) s.push_back(v);
  return s;
}

// Candidate prefix depths scanned from both ends, per the ball-growing
// argument: the first depth whose verified inequality holds is returned.
std::vector<long> scan_order(const std::vector<long>& dists) {
  std::vector<long> order;
  size_t lo = 0, hi = dists.size();
  bool front = true;
  while (lo < hi) {
    if (front)
      order.push_back(dists[lo++]);
    else
      order.push_back(dists[--hi]);
    front = !front;
  }
  return order;
}

}  // namespace

FlowOrCut local_flow(const DiGraph& g, const FlowProblem& pi, const Rat& z,
                     const Rat& delta_bar, const Int& h) {
  if (z < 0) throw input_error("local_flow: z must be >= 0");
  // T(v) >= deg(v) is a stated condition that the one-shot pruning caller
  // cannot meet on its helper vertices; when it fails anywhere we only drop
  // the vol(S) <= Delta(V) half of the cut guarantee.
  bool sink_covers_degree = true;
  for (int v = 0; v < g.vertex_slots(); ++v) {
    if (!g.vertex_alive(v)) continue;
    if (!is_integral(pi.delta[v]) || !is_integral(pi.sink[v]))
      throw input_error("local_flow: problem must be integral");
    Rat deg(g.udeg_out(v) + g.udeg_in(v));
    if (pi.delta[v] > delta_bar * deg)
      throw input_error("local_flow: Delta(v) exceeds delta_bar*deg(v)");
    if (pi.sink[v] < deg) sink_covers_degree = false;
  }
  for (int e : g.edges())
    if (!pi.cap_inf[e] && !is_integral(pi.cap[e]))
      throw input_error("local_flow: capacities must be integral");

  Preflow pf = bounded_flow(g, pi, h);
  FlowOrCut res;
  if (pf.total_excess <= z) {
    res.preflow = std::move(pf);
    return res;
  }
  Rat total_cap = pi.total_cap();
  Rat log_term = Rat(10 * ceil_log2(total_cap)) / Rat(h);
  Rat delta_total = pi.total_delta();
  for (long d : scan_order(distinct_finite_dists(pf, g))) {
    std::vector<char> in_s = prefix_mask(g, pf, d);
    std::vector<int> side = mask_to_set(g, in_s);
    if (side.empty() || static_cast<int>(side.size()) == g.num_vertices())
      continue;
    Rat vol_s = g.volume(side);
    if (!(vol_s * delta_bar > z)) continue;
    if (sink_covers_degree && vol_s > delta_total) continue;
    Rat cap_cut = cut_capacity_out(g, pi, in_s);
    Rat ds = 0, ts = 0;
    for (int v : side) {
      ds += pi.delta[v];
      ts += pi.sink[v];
    }
    Rat bound = ds - ts - z + cap_volume(g, pi, in_s, true) * log_term;
    if (cap_cut <= bound) {
      res.cut_side = std::move(side);
      res.cut_capacity = cap_cut;
      res.cut_bound = bound;
      return res;
    }
  }
  throw verify_error("local_flow: no level cut satisfies the bound");
}

FlowOrCut global_flow(const DiGraph& g, const FlowProblem& pi, const Rat& z,
                      const Int& h) {
  if (z < 0) throw input_error("global_flow: z must be >= 0");
  if (pi.total_delta() > pi.total_sink())
    throw input_error("global_flow: Delta(V) must be <= T(V)");
  for (int v = 0; v < g.vertex_slots(); ++v)
    if (g.vertex_alive(v) && (pi.delta[v] > 1 || pi.sink[v] > 1))
      throw input_error("global_flow: Delta(v), T(v) must be <= 1");

  Preflow pf = bounded_flow(g, pi, h);
  FlowOrCut res;
  if (pf.total_excess <= z) {
    res.preflow = std::move(pf);
    return res;
  }
  Rat total_cap = pi.total_cap();
  Rat log_term = Rat(10 * ceil_log2(total_cap)) / Rat(h);
  int n = g.num_vertices();
  for (long d : scan_order(distinct_finite_dists(pf, g))) {
    std::vector<char> in_s = prefix_mask(g, pf, d);
    std::vector<int> side = mask_to_set(g, in_s);
    if (side.empty() || static_cast<int>(side.size()) == n) continue;
    if (!(Rat(side.size()) > z)) continue;
    if (!(Rat(n - side.size()) > z)) continue;
    Rat cap_cut = cut_capacity_out(g, pi, in_s);
    Rat ds = 0, ts = 0;
    for (int v : side) {
      ds += pi.delta[v];
      ts += pi.sink[v];
    }
    Rat vol_in = cap_volume(g, pi, in_s, true);
    Rat vol_out = cap_volume(g, pi, in_s, false);
    Rat bound = ds - ts - z + std::min(vol_in, vol_out) * log_term;
    if (cap_cut <= bound) {
      res.cut_side = std::move(side);
      res.cut_capacity = cap_cut;
      res.cut_bound = bound;
      return res;
    }
  }
  throw verify_error("global_flow: no level cut satisfies the bound");
}

FlowOrCut matching_flow(const DiGraph& g, const std::vector<int>& left,
                        const std::vector<int>& right, const FlowProblem& pi,
                        const Rat& z, const Int& h) {
  std::vector<char> is_left(g.vertex_slots(), 0), is_right(g.vertex_slots(), 0);
  for (int v : left) is_left[v] = 1;
  for (int v : right) is_right[v] = 1;
  for (int v : g.vertices())
    if (!is_left[v] && !is_right[v])
      throw input_error("matching_flow: vertex in neither side");
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    if (!is_left[ed.tail] || !is_right[ed.head])
      throw input_error("matching_flow: edges must be directed L -> R");
  }
  Rat dl = 0, tr = 0;
  for (int v : g.vertices()) {
    if (pi.delta[v] > 1 || pi.sink[v] > 1)
      throw input_error("matching_flow: Delta(v), T(v) must be <= 1");
    if (is_right[v] && pi.delta[v] != 0)
      throw input_error("matching_flow: Delta(R) must be 0");
    if (is_left[v] && pi.sink[v] != 0)
      throw input_error("matching_flow: T(L) must be 0");
    dl += pi.delta[v];
    tr += pi.sink[v];
  }
  if (dl > tr) throw input_error("matching_flow: Delta(L) must be <= T(R)");

  Preflow pf = bounded_flow(g, pi, h);
  // Bipartite alternation: odd residual distances lie in L, even in R.
  for (int v : g.vertices()) {
    if (pf.label_zero(v)) continue;
    bool odd = pf.dist[v] % 2 == 1;
    if (odd != (is_left[v] != 0))
      throw verify_error("matching_flow: alternating-level property violated");
  }
  FlowOrCut res;
  if (pf.total_excess <= z) {
    res.preflow = std::move(pf);
    return res;
  }
  Rat slack = 2 * (pi.total_delta() - z) / Rat(h);
  int n = g.num_vertices();
  // Cut thresholds are even: S = V_{>h-2i} collects residual distances <= 2i.
  std::set<long> even_set;
  for (long d : distinct_finite_dists(pf, g))
    even_set.insert(d % 2 == 0 ? d : d + 1);
  std::vector<long> even_dists(even_set.begin(), even_set.end());
  for (long d : scan_order(even_dists)) {
    std::vector<char> in_s = prefix_mask(g, pf, d);
    std::vector<int> side = mask_to_set(g, in_s);
    if (side.empty() || static_cast<int>(side.size()) == n) continue;
    if (!(Rat(side.size()) > z)) continue;
    if (!(Rat(n - side.size()) > z)) continue;
    Rat cap_cut = cut_capacity_out(g, pi, in_s);
    Rat ds = 0, ts = 0;
    for (int v : side) {
      ds += pi.delta[v];
      ts += pi.sink[v];
    }
    Rat bound = ds - ts - z + slack;
    if (cap_cut <= bound) {
      res.cut_side = std::move(side);
      res.cut_capacity = cap_cut;
      res.cut_bound = bound;
      return res;
    }
  }
  throw verify_error("matching_flow: no level cut satisfies the bound");
}

}  // namespace dygx
