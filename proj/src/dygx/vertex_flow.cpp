#include "vertex_flow.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dygx {

Rat VertexCapProblem::total_kappa() const {
  Rat s = 0;
  for (size_t v = 0; v < kappa.size(); ++v)
    if (regular[v]) s += kappa[v];
  return s;
}

IncidenceGraph incidence_of(const DiGraph& g) {
  IncidenceGraph inc;
  inc.host_slots = g.vertex_slots();
  std::vector<int> es = g.edges();
  inc.graph.reset(g.vertex_slots() + static_cast<int>(es.size()));
  for (int v = 0; v < g.vertex_slots(); ++v)
    if (!g.vertex_alive(v)) inc.graph.delete_vertex(v);
  inc.hyper_vertex.assign(g.edge_slots(), -1);
  for (size_t k = 0; k < es.size(); ++k) {
    int e = es[k];
    int x = g.vertex_slots() + static_cast<int>(k);
    inc.edge_list.push_back(e);
    inc.hyper_vertex[e] = x;
    inc.graph.add_edge(g.edge(e).tail, x, 1);
    inc.graph.add_edge(x, g.edge(e).head, 1);
  }
  return inc;
}

FlowPath incidence_path_to_host(const IncidenceGraph& inc, const FlowPath& p) {
  FlowPath out;
  out.val = p.val;
  for (int v : p.vertices) {
    if (v < inc.host_slots) {
      out.vertices.push_back(v);
    } else {
      out.edge_ids.push_back(inc.edge_list[v - inc.host_slots]);
    }
  }
  if (out.vertices.size() != out.edge_ids.size() + 1)
    throw verify_error("incidence path does not alternate vertex/edge nodes");
  return out;
}

namespace {

struct SplitGraph {
  DiGraph g;
  std::vector<int> in_id, out_id;  // per incidence slot; hyper nodes map to one
  std::vector<int> cap_edge;       // (v_in, v_out) edge id per regular slot
};

SplitGraph build_split(const DiGraph& gb, const VertexCapProblem& pi) {
  SplitGraph sg;
  int slots = gb.vertex_slots();
  sg.in_id.assign(slots, -1);
  sg.out_id.assign(slots, -1);
  sg.cap_edge.assign(slots, -1);
  int count = 0;
  for (int v = 0; v < slots; ++v) {
    if (!gb.vertex_alive(v)) continue;
    count += pi.regular[v] ? 2 : 1;
  }
  sg.g.reset(count);
  int next = 0;
  for (int v = 0; v < slots; ++v) {
    if (!gb.vertex_alive(v)) continue;
    if (pi.regular[v]) {
      sg.in_id[v] = next++;
      sg.out_id[v] = next++;
    } else {
      sg.in_id[v] = sg.out_id[v] = next++;
    }
  }
  return sg;
}

}  // namespace

VertexFlowResult vertex_capacitated_flow(const DiGraph& gb,
                                         const VertexCapProblem& pi,
                                         const Rat& z, const Int& h,
                                         const Rat& eps_len) {
  if (h < 2) throw input_error("vertex_capacitated_flow: h must be >= 2");
  Rat kappa_total = pi.total_kappa();
  Rat delta_total = 0, sink_total = 0;
  for (int v : gb.vertices()) {
    if (!pi.regular[v]) {
      if (pi.delta[v] != 0 || pi.sink[v] != 0)
        throw input_error("vertex_capacitated_flow: mass on a hyperedge vertex");
      continue;
    }
    if (pi.delta[v] > pi.kappa[v] / 2 || pi.sink[v] > pi.kappa[v] / 2)
      throw input_error("vertex_capacitated_flow: Delta/T exceed kappa/2");
    if (pi.kappa[v] > kappa_total / 2)
      throw input_error("vertex_capacitated_flow: kappa(v) > kappa(V)/2");
    delta_total += pi.delta[v];
    sink_total += pi.sink[v];
  }
  if (delta_total > sink_total)
    throw input_error("vertex_capacitated_flow: Delta(V) must be <= T(V)");
  for (int e : gb.edges()) {
    const Edge& ed = gb.edge(e);
    if (pi.regular[ed.tail] == pi.regular[ed.head])
      throw input_error("vertex_capacitated_flow: not an incidence graph");
  }

  SplitGraph sg = build_split(gb, pi);
  FlowProblem sp = FlowProblem::zeros(sg.g, pi.unit);
  for (int v : gb.vertices()) {
    if (!pi.regular[v]) continue;
    sg.cap_edge[v] = sg.g.add_edge(sg.in_id[v], sg.out_id[v], pi.kappa[v]);
    sp.cap.push_back(pi.kappa[v]);
    sp.cap_inf.push_back(0);
    sp.delta[sg.in_id[v]] = pi.delta[v];
    sp.sink[sg.out_id[v]] = pi.sink[v];
  }
  for (int e : gb.edges()) {
    const Edge& ed = gb.edge(e);
    sg.g.add_edge(sg.out_id[ed.tail], sg.in_id[ed.head], 0);
    sp.cap.push_back(Rat(0));
    sp.cap_inf.push_back(1);
  }

  Preflow pf = bounded_flow(sg.g, sp, h);
  // the preflow label contract2: leftover excess at v_in implies a saturated sink at
  // v_out.
  for (int v : gb.vertices()) {
    if (!pi.regular[v]) continue;
    if (pf.excess[sg.in_id[v]] > 0 &&
        pf.absorbed[sg.out_id[v]] != pi.sink[v])
      throw verify_error("vertex flow: the preflow label contract2 preprocessing violated");
  }

  VertexFlowResult res;
  Rat excess = pf.total_excess;
  res.excess = excess;
  if (excess <= z) {
    res.has_flow = true;
    PathDecomposition dec = decompose(sg.g, pf);
    Int len_cap = floor_rat(Rat(h) / eps_len);
    res.length_bound = len_cap;
    std::vector<int> owner(sg.g.vertex_slots(), -1);
    for (int v = 0; v < gb.vertex_slots(); ++v) {
      if (!gb.vertex_alive(v)) continue;
      owner[sg.in_id[v]] = v;
      owner[sg.out_id[v]] = v;
    }
    Rat kept = 0;
    for (const FlowPath& p : dec.paths) {
      if (Int(p.edge_ids.size()) > len_cap) continue;
      // Back to incidence slots, collapsing each v_in/v_out pair.
      FlowPath q;
      q.val = p.val;
      for (int node : p.vertices) {
        int w = owner[node];
        if (q.vertices.empty() || q.vertices.back() != w) q.vertices.push_back(w);
      }
      for (size_t i = 0; i + 1 < q.vertices.size(); ++i) {
        int eid = gb.find_edge(q.vertices[i], q.vertices[i + 1]);
        if (eid < 0) throw verify_error("vertex flow: path edge missing in G");
        q.edge_ids.push_back(eid);
      }
      kept += q.val;
      res.paths.paths.push_back(std::move(q));
    }
    res.kept_value = kept;
    Rat want = (1 - eps_len) * (delta_total - excess);
    if (kept < want)
      throw verify_error("vertex flow: short-path filter kept too little value");
    return res;
  }

  // Cut arm: scan levels i (as distance thresholds D = h - i + 1).
  std::set<long> cand;
  for (int v : sg.g.vertices())
    if (!pf.label_zero(v)) {
      cand.insert(pf.dist[v]);
      cand.insert(pf.dist[v] + 1);
    }
  Rat slack_coeff =
      Rat(kVertexCutSlackConstant * ceil_log2(kappa_total)) / Rat(h);
  auto dist_of = [&](int node) { return pf.dist[node]; };
  auto finite_lt = [&](int node, long D) {
    return !pf.label_zero(node) && dist_of(node) < D;
  };
  auto at_level = [&](int node, long D) {
    return !pf.label_zero(node) && dist_of(node) == D;
  };
  for (long D : cand) {
    if (D < 2 || Int(D) > h) continue;
    std::vector<char> in_s(gb.vertex_slots(), 0);
    for (int v : gb.vertices()) {
      if (!pi.regular[v]) continue;
      int vin = sg.in_id[v], vout = sg.out_id[v];
      bool skip = finite_lt(vin, D) && !finite_lt(vout, D) && !at_level(vout, D);
      bool at = at_level(vin, D) || at_level(vout, D);
      if (skip || at) in_s[v] = 1;
    }
    for (int e : gb.edges()) {
      const Edge& ed = gb.edge(e);
      if (!pi.regular[ed.head] && pi.regular[ed.tail]) {
        // (v_out, x): x in V_i, v_out in V_{i+1}
        int x = sg.in_id[ed.head], vout = sg.out_id[ed.tail];
        if (at_level(x, D) && at_level(vout, D - 1)) in_s[ed.tail] = 1;
      } else if (pi.regular[ed.head] && !pi.regular[ed.tail]) {
        // (x, v_in): x in V_i, v_in in V_{i+1}
        int x = sg.in_id[ed.tail], vin = sg.in_id[ed.head];
        if (at_level(x, D) && at_level(vin, D - 1)) in_s[ed.head] = 1;
      }
    }
    std::vector<int> L, R, F;
    for (int v : gb.vertices()) {
      if (!pi.regular[v] || in_s[v]) continue;
      bool lbar = finite_lt(sg.out_id[v], D);
      bool rbar = !finite_lt(sg.in_id[v], D) && !at_level(sg.in_id[v], D);
      if (lbar && rbar)
        F.push_back(v);
      else if (lbar)
        L.push_back(v);
      else if (rbar)
        R.push_back(v);
      else
        throw verify_error("vertex flow: (L,S,R,F) does not cover V");
    }
    auto ksum = [&](const std::vector<int>& xs) {
      Rat s = 0;
      for (int v : xs) s += pi.kappa[v];
      return s;
    };
    Rat kF = ksum(F);
    Rat kS = 0;
    for (int v : gb.vertices())
      if (pi.regular[v] && in_s[v]) kS += pi.kappa[v];
    Rat kL = ksum(L), kR = ksum(R);
    // free-set split.
    std::vector<int> FL, FR;
    if (kL + kS >= kF / 10) {
      FR = F;
    } else if (kR + kS >= kF / 10) {
      FL = F;
    } else {
      std::tie(FL, FR) = balanced_free_split(pi.kappa, F);
      if (ksum(FL) < kF / 4 || ksum(FR) < kF / 4) continue;
    }
    std::vector<int> Lfull = L, Rfull = R;
    Lfull.insert(Lfull.end(), FL.begin(), FL.end());
    Rfull.insert(Rfull.end(), FR.begin(), FR.end());
    std::vector<int> Sset;
    for (int v : gb.vertices())
      if (pi.regular[v] && in_s[v]) Sset.push_back(v);
    // Verify the one-direction separation: no L -> R path in G - S.
    {
      std::vector<char> blocked(gb.vertex_slots(), 0), seen(gb.vertex_slots(), 0);
      for (int v : Sset) blocked[v] = 1;
      std::deque<int> q;
      for (int v : Lfull) {
        seen[v] = 1;
        q.push_back(v);
      }
      bool leak = false;
      std::vector<char> is_r(gb.vertex_slots(), 0);
      for (int v : Rfull) is_r[v] = 1;
      while (!q.empty() && !leak) {
        int u = q.front();
        q.pop_front();
        for (int e : gb.out_edges(u)) {
          int w = gb.edge(e).head;
          if (blocked[w] || seen[w]) continue;
          if (is_r[w]) {
            leak = true;
            break;
          }
          seen[w] = 1;
          q.push_back(w);
        }
      }
      if (leak) continue;
    }
    auto dsum = [&](const std::vector<int>& xs) {
      Rat s = 0;
      for (int v : xs) s += pi.delta[v];
      return s;
    };
    auto tsum = [&](const std::vector<int>& xs) {
      Rat s = 0;
      for (int v : xs) s += pi.sink[v];
      return s;
    };
    Rat dLS = dsum(Lfull) + dsum(Sset), tRS = tsum(Rfull) + tsum(Sset);
    if (!(std::min(dLS, tRS) > z)) continue;
    Rat kLS = ksum(Lfull) + kS, kSR = kS + ksum(Rfull);
    Rat bound = 2 * (std::min(dsum(Lfull), tsum(Rfull)) - z) +
                slack_coeff * std::min(kLS, kSR);
    if (!(kS <= bound)) continue;
    res.left = std::move(Lfull);
    res.sep = std::move(Sset);
    res.right = std::move(Rfull);
    res.sep_kappa = kS;
    res.sep_bound = bound;
    return res;
  }
  throw verify_error("vertex_capacitated_flow: no level cut satisfies the bound");
}

std::pair<std::vector<int>, std::vector<int>> balanced_free_split(
    const std::vector<Rat>& kappa, const std::vector<int>& f) {
  Rat total = 0;
  for (int v : f) total += kappa[v];
  std::vector<int> order = f;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (kappa[a] != kappa[b]) return kappa[a] > kappa[b];
    return a < b;
  });
  std::vector<int> fl, fr;
  if (!order.empty() && kappa[order[0]] >= total / 4) {
    // One heavy item: it stands alone and the rest is still large because
    // kappa(v) <= kappa(V)/2 <= (2/3) kappa(F) in case 3.
    fl.push_back(order[0]);
    fr.assign(order.begin() + 1, order.end());
  } else {
    Rat wl = 0, wr = 0;
    for (int v : order) {
      if (wl <= wr) {
        fl.push_back(v);
        wl += kappa[v];
      } else {
        fr.push_back(v);
        wr += kappa[v];
      }
    }
  }
  return {fl, fr};
}

CongestedMatchingResult vertex_congested_matching(const DiGraph& g,
                                                  const std::vector<int>& a,
                                                  const std::vector<int>& b,
                                                  const Rat& phi,
                                                  const Rat& eps) {
  std::vector<char> in_a(g.vertex_slots(), 0), in_b(g.vertex_slots(), 0);
  for (int v : a) in_a[v] = 1;
  for (int v : b) {
    if (in_a[v]) throw input_error("vertex_congested_matching: A and B overlap");
    in_b[v] = 1;
  }
  int n = g.num_vertices();
  if (4 * a.size() < static_cast<size_t>(n) || a.size() > b.size())
    throw input_error("vertex_congested_matching: need n/4 <= |A| <= |B|");
  if (phi <= 0 || phi > Rat(1, 2))
    throw input_error("vertex_congested_matching: need phi in (0, 1/2]");
  if (eps <= 0 || eps > 1)
    throw input_error("vertex_congested_matching: need eps in (0, 1]");

  IncidenceGraph inc = incidence_of(g);
  VertexCapProblem pi;
  int slots = inc.graph.vertex_slots();
  pi.regular.assign(slots, 0);
  pi.kappa.assign(slots, Rat(0));
  pi.delta.assign(slots, Rat(0));
  pi.sink.assign(slots, Rat(0));
  pi.unit = 1;
  Int cap = floor_rat(1 / phi);
  for (int v = 0; v < inc.host_slots; ++v) {
    if (!inc.graph.vertex_alive(v)) continue;
    pi.regular[v] = 1;
    pi.kappa[v] = Rat(cap);
    if (in_a[v]) pi.delta[v] = 1;
    if (in_b[v]) pi.sink[v] = 1;
  }
  Rat kappa_total = Rat(cap) * n;
  Int h = Int(kVertexCutSlackConstant) * ceil_log2(kappa_total) * cap;
  if (h < 2) h = 2;
  Rat z = eps * Rat(a.size()) / 2;

  VertexFlowResult vf =
      vertex_capacitated_flow(inc.graph, pi, z, h, eps / 2);
  CongestedMatchingResult res;
  res.congestion_bound = Rat(cap);
  res.length_bound = vf.length_bound;
  if (vf.has_flow) {
    res.has_matching = true;
    std::vector<Rat> through(g.vertex_slots(), Rat(0));
    Rat total = 0;
    for (const FlowPath& p : vf.paths.paths) {
      FlowPath host = incidence_path_to_host(inc, p);
      if (host.val != 1)
        throw verify_error("vertex_congested_matching: non-unit path value");
      int src = host.vertices.front(), dst = host.vertices.back();
      if (!in_a[src] || !in_b[dst])
        throw verify_error("vertex_congested_matching: path endpoints off A/B");
      res.matching.emplace_back(src, dst);
      for (int v : host.vertices) through[v] += host.val;
      total += host.val;
      res.embedding.push_back(std::move(host));
    }
    for (int v : g.vertices())
      if (through[v] > res.congestion_bound)
        throw verify_error("vertex_congested_matching: congestion exceeded");
    if (total < (1 - eps) * Rat(a.size()))
      throw verify_error("vertex_congested_matching: matching too small");
    return res;
  }
  VertexCutView cut;
  cut.left = vf.left;
  cut.sep = vf.sep;
  cut.right = vf.right;
  cut.direction = CutDirection::lr_empty;
  size_t small = std::min(cut.left.size(), cut.right.size());
  if (!(Rat(cut.sep.size()) <= 6 * phi * Rat(small)))
    throw verify_error("vertex_congested_matching: cut not 6*phi-sparse");
  if (!(Rat(small) >= eps * Rat(n) / 10))
    throw verify_error("vertex_congested_matching: cut not balanced");
  if (!verify_vertex_cut(g, cut))
    throw verify_error("vertex_congested_matching: invalid vertex cut");
  res.cut = std::move(cut);
  return res;
}

}  // namespace dygx
