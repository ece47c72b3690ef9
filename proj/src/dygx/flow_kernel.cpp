#include "flow_kernel.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dygx {

FlowProblem FlowProblem::zeros(const DiGraph& g, Rat unit) {
  FlowProblem pi;
  pi.delta.assign(g.vertex_slots(), Rat(0));
  pi.sink.assign(g.vertex_slots(), Rat(0));
  pi.cap.assign(g.edge_slots(), Rat(0));
  pi.cap_inf.assign(g.edge_slots(), 0);
  pi.unit = std::move(unit);
  return pi;
}

Rat FlowProblem::total_delta() const {
  Rat s = 0;
  for (const Rat& x : delta) s += x;
  return s;
}

Rat FlowProblem::total_sink() const {
  Rat s = 0;
  for (const Rat& x : sink) s += x;
  return s;
}

Rat FlowProblem::total_cap() const {
  Rat s = 0;
  for (size_t i = 0; i < cap.size(); ++i)
    if (!cap_inf[i]) s += cap[i];
  return s;
}

namespace {

struct Arc {
  int to;
  int rev;        // index of reverse arc in arcs[to]
  Rat cap;        // 0 for pure residual arcs
  Rat flow;
  bool inf = false;
  int edge_id = -1;  // original graph edge, -1 for source/sink arcs
  bool forward = true;

  Rat residual_finite() const { return cap - flow; }
  bool has_residual() const { return inf || flow < cap; }
};

struct Net {
  int n;  // node count including s, t
  int s, t;
  std::vector<std::vector<Arc>> arcs;

  void add(int u, int v, Rat cap, bool inf, int edge_id) {
    Arc a{v, static_cast<int>(arcs[v].size()), std::move(cap), Rat(0), inf,
          edge_id, true};
    Arc b{u, static_cast<int>(arcs[u].size()), Rat(0), Rat(0), false, edge_id,
          false};
    arcs[u].push_back(std::move(a));
    arcs[v].push_back(std::move(b));
  }
};

// Residual BFS from s. Backward arcs have residual equal to the paired
// forward flow.
std::vector<long> residual_bfs(const Net& net) {
  std::vector<long> dist(net.n, -1);
  std::deque<int> q;
  dist[net.s] = 0;
  q.push_back(net.s);
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (const Arc& a : net.arcs[u]) {
      bool open = a.forward ? a.has_residual() : net.arcs[a.to][a.rev].flow > 0;
      if (!open) continue;
      if (dist[a.to] < 0) {
        dist[a.to] = dist[u] + 1;
        q.push_back(a.to);
      }
    }
  }
  return dist;
}

bool arc_open(const Net& net, const Arc& a) {
  if (a.forward) return a.has_residual();
  return net.arcs[a.to][a.rev].flow > 0;
}

Rat arc_headroom(const Net& net, const Arc& a) {
  if (a.forward) {
    if (a.inf) return Rat(-1);  // sentinel: unbounded
    return a.cap - a.flow;
  }
  return net.arcs[a.to][a.rev].flow;
}

void arc_push(Net& net, int u, int ai, const Rat& amount) {
  Arc& a = net.arcs[u][ai];
  if (a.forward) {
    a.flow += amount;
    net.arcs[a.to][a.rev].flow = a.flow;  // mirror for bookkeeping
  } else {
    Arc& fwd = net.arcs[a.to][a.rev];
    fwd.flow -= amount;
    a.flow = fwd.flow;
  }
}

// One blocking-flow phase on the level graph given by dist. Returns pushed
// value.
Rat blocking_flow(Net& net, const std::vector<long>& dist) {
  std::vector<size_t> iter(net.n, 0);
  Rat pushed_total = 0;
  std::vector<std::pair<int, int>> path;  // (node, arc index)
  while (true) {
    path.clear();
    int u = net.s;
    bool reached = false;
    while (true) {
      if (u == net.t) {
        reached = true;
        break;
      }
      bool advanced = false;
      while (iter[u] < net.arcs[u].size()) {
        const Arc& a = net.arcs[u][iter[u]];
        if (arc_open(net, a) && dist[a.to] == dist[u] + 1) {
          path.emplace_back(u, static_cast<int>(iter[u]));
          u = a.to;
          advanced = true;
          break;
        }
        ++iter[u];
      }
      if (advanced) continue;
      if (path.empty()) break;  // no more augmenting paths in this phase
      // retreat
      u = path.back().first;
      ++iter[u];
      path.pop_back();
    }
    if (!reached) break;
    Rat bottleneck = -1;
    for (auto [v, ai] : path) {
      Rat head = arc_headroom(net, net.arcs[v][ai]);
      if (head < 0) continue;  // unbounded
      if (bottleneck < 0 || head < bottleneck) bottleneck = head;
    }
    if (bottleneck <= 0)
      throw verify_error("blocking_flow: zero bottleneck on augmenting path");
    for (auto [v, ai] : path) arc_push(net, v, ai, bottleneck);
    pushed_total += bottleneck;
  }
  return pushed_total;
}

// Cancel directed cycles of positive flow on the original graph arcs so the
// edge flow is acyclic. Source/sink arcs cannot lie on cycles.
void cancel_flow_cycles(const DiGraph& g, std::vector<Rat>& f) {
  int n = g.vertex_slots();
  while (true) {
    // Iterative DFS over positive-flow edges with on-stack marking.
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::pair<int, size_t>> stack;
    std::vector<int> via_edge(n, -1);
    bool cancelled = false;
    for (int root = 0; root < n && !cancelled; ++root) {
      if (!g.vertex_alive(root) || state[root] != 0) continue;
      stack.clear();
      stack.push_back({root, 0});
      state[root] = 1;
      while (!stack.empty() && !cancelled) {
        auto& [v, idx] = stack.back();
        const std::vector<int>& outs = g.out_raw(v);
        bool descended = false;
        while (idx < outs.size()) {
          int e = outs[idx];
          ++idx;
          if (!g.edge_alive(e) || f[e] <= 0) continue;
          int w = g.edge(e).head;
          if (w == v) continue;  // self loop carries no acyclic flow
          if (state[w] == 1) {
            // Found a cycle w -> ... -> v -> w; walk the stack back to w.
            std::vector<int> cyc{e};
            for (size_t i = stack.size(); i-- > 0;) {
              int node = stack[i].first;
              if (node == w) break;
              cyc.push_back(via_edge[node]);
            }
            Rat m = f[cyc[0]];
            for (int ce : cyc) m = std::min(m, f[ce]);
            for (int ce : cyc) f[ce] -= m;
            cancelled = true;
            break;
          }
          if (state[w] == 0) {
            state[w] = 1;
            via_edge[w] = e;
            stack.push_back({w, 0});
            descended = true;
            break;
          }
        }
        if (cancelled || descended) continue;
        state[v] = 2;
        stack.pop_back();
      }
    }
    if (!cancelled) return;
  }
}

}  // namespace

Preflow bounded_flow(const DiGraph& g, const FlowProblem& pi, const Int& h) {
  if (h < 1) throw input_error("bounded_flow: h must be >= 1");
  int n = g.vertex_slots();
  Net net;
  net.n = n + 2;
  net.s = n;
  net.t = n + 1;
  net.arcs.assign(net.n, {});
  std::vector<int> main_arc_pos(g.edge_slots(), -1);
  std::vector<int> main_arc_tail(g.edge_slots(), -1);
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    const Edge& ed = g.edge(e);
    if (!pi.cap_inf[e] && pi.cap[e] < 0)
      throw input_error("bounded_flow: negative capacity");
    main_arc_tail[e] = ed.tail;
    main_arc_pos[e] = static_cast<int>(net.arcs[ed.tail].size());
    net.add(ed.tail, ed.head, pi.cap_inf[e] ? Rat(0) : pi.cap[e],
            pi.cap_inf[e] != 0, e);
  }
  for (int v = 0; v < n; ++v) {
    if (!g.vertex_alive(v)) continue;
    if (pi.delta[v] < 0 || pi.sink[v] < 0)
      throw input_error("bounded_flow: negative source or sink");
    if (pi.delta[v] > 0) net.add(net.s, v, pi.delta[v], false, -1);
    if (pi.sink[v] > 0) net.add(v, net.t, pi.sink[v], false, -1);
  }

  auto extract_flow = [&]() {
    std::vector<Rat> f(g.edge_slots(), Rat(0));
    for (int e = 0; e < g.edge_slots(); ++e)
      if (main_arc_pos[e] >= 0)
        f[e] = net.arcs[main_arc_tail[e]][main_arc_pos[e]].flow;
    return f;
  };
  auto write_back = [&](const std::vector<Rat>& f) {
    for (int e = 0; e < g.edge_slots(); ++e)
      if (main_arc_pos[e] >= 0) {
        Arc& a = net.arcs[main_arc_tail[e]][main_arc_pos[e]];
        a.flow = f[e];
        net.arcs[a.to][a.rev].flow = f[e];
      }
  };

  std::vector<long> dist;
  auto done = [&](long dist_t) {
    if (dist_t < 0) return true;
    return Int(dist_t) >= h + 2;
  };
  while (true) {
    dist = residual_bfs(net);
    while (!done(dist[net.t])) {
      blocking_flow(net, dist);
      dist = residual_bfs(net);
    }
    std::vector<Rat> f = extract_flow();
    cancel_flow_cycles(g, f);
    write_back(f);
    dist = residual_bfs(net);
    if (done(dist[net.t])) break;
  }

  Preflow pf;
  pf.height = h;
  pf.flow = extract_flow();
  pf.dist.assign(n, -1);
  for (int v = 0; v < n; ++v)
    if (g.vertex_alive(v)) pf.dist[v] = dist[v];
  pf.mass.assign(n, Rat(0));
  pf.absorbed.assign(n, Rat(0));
  pf.excess.assign(n, Rat(0));
  pf.total_excess = 0;
  std::vector<Rat> in_flow(n, Rat(0)), out_flow(n, Rat(0));
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    const Edge& ed = g.edge(e);
    out_flow[ed.tail] += pf.flow[e];
    in_flow[ed.head] += pf.flow[e];
  }
  for (int v = 0; v < n; ++v) {
    if (!g.vertex_alive(v)) continue;
    pf.mass[v] = pi.delta[v] + in_flow[v] - out_flow[v];
    pf.absorbed[v] = std::min(pf.mass[v], pi.sink[v]);
    pf.excess[v] = pf.mass[v] - pf.absorbed[v];
    pf.total_excess += pf.excess[v];
  }
  return pf;
}

std::vector<std::string> check_preflow(const DiGraph& g, const FlowProblem& pi,
                                       const Preflow& pf) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& s) { bad.push_back(s); };
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    const Edge& ed = g.edge(e);
    if (pf.flow[e] < 0) fail("negative flow on edge " + std::to_string(e));
    if (!pi.cap_inf[e] && pf.flow[e] > pi.cap[e])
      fail("capacity exceeded on edge " + std::to_string(e));
    if (!is_unit_multiple(pf.flow[e], pi.unit) && pf.flow[e] > 0)
      fail("flow not 1/d-integral on edge " + std::to_string(e));
    // Item 1 and 2
    if (pf.label_gap(ed.tail, ed.head)) {
      if (pi.cap_inf[e])
        fail("infinite-capacity edge skips levels: " + std::to_string(e));
      else if (pf.flow[e] != pi.cap[e])
        fail("skipping edge unsaturated: " + std::to_string(e));
    }
    if (pf.label_gap(ed.head, ed.tail) && pf.flow[e] != 0)
      fail("reverse skipping edge carries flow: " + std::to_string(e));
  }
  for (int v = 0; v < g.vertex_slots(); ++v) {
    if (!g.vertex_alive(v)) continue;
    // label(v) = h exactly when the residual distance from s is 1.
    if (pf.dist[v] != 1 && pf.excess[v] != 0)
      fail("excess below level h at vertex " + std::to_string(v));
    if (!pf.label_zero(v) && pf.absorbed[v] != pi.sink[v])
      fail("unsaturated sink above level 0 at vertex " + std::to_string(v));
    Rat init_ex = std::max(Rat(0), pi.delta[v] - pi.sink[v]);
    Rat init_ab = std::min(pi.delta[v], pi.sink[v]);
    if (pf.excess[v] > init_ex)
      fail("excess grew at vertex " + std::to_string(v));
    if (pf.absorbed[v] < init_ab)
      fail("absorbed shrank at vertex " + std::to_string(v));
  }
  return bad;
}

Rat PathDecomposition::total_value() const {
  Rat s = 0;
  for (const FlowPath& p : paths) s += p.val;
  return s;
}

Rat PathDecomposition::weighted_length() const {
  Rat s = 0;
  for (const FlowPath& p : paths) s += p.val * Rat(p.edge_ids.size());
  return s;
}

PathDecomposition decompose(const DiGraph& g, const Preflow& pf) {
  int n = g.vertex_slots();
  std::vector<Rat> f = pf.flow;
  std::vector<Rat> netout(n, Rat(0));
  std::vector<std::vector<int>> pos_out(n);
  for (int e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e) || f[e] <= 0) continue;
    const Edge& ed = g.edge(e);
    netout[ed.tail] += f[e];
    netout[ed.head] -= f[e];
    pos_out[ed.tail].push_back(e);
  }
  std::vector<size_t> cursor(n, 0);
  PathDecomposition dec;
  for (int v = 0; v < n; ++v) {
    while (netout[v] > 0) {
      FlowPath p;
      p.vertices.push_back(v);
      int u = v;
      Rat bottleneck = netout[v];
      while (true) {
        while (cursor[u] < pos_out[u].size() && f[pos_out[u][cursor[u]]] <= 0)
          ++cursor[u];
        if (cursor[u] >= pos_out[u].size()) break;
        int e = pos_out[u][cursor[u]];
        p.edge_ids.push_back(e);
        bottleneck = std::min(bottleneck, f[e]);
        u = g.edge(e).head;
        p.vertices.push_back(u);
      }
      if (p.edge_ids.empty())
        throw verify_error("decompose: supply vertex with no outgoing flow");
      p.val = bottleneck;
      for (int e : p.edge_ids) f[e] -= bottleneck;
      netout[v] -= bottleneck;
      netout[u] += bottleneck;
      dec.paths.push_back(std::move(p));
    }
  }
  for (int e = 0; e < g.edge_slots(); ++e)
    if (g.edge_alive(e) && f[e] != 0)
      throw verify_error("decompose: leftover flow implies a cycle");
  return dec;
}

FeasibleFlow strip_excess(const DiGraph& g, const FlowProblem& pi,
                          const Preflow& pf) {
  FeasibleFlow ff;
  ff.flow = pf.flow;
  ff.value = 0;
  for (int v = 0; v < g.vertex_slots(); ++v)
    if (g.vertex_alive(v)) ff.value += pf.absorbed[v];
  Rat alt = pi.total_delta() - pf.total_excess;
  if (ff.value != alt)
    throw verify_error("strip_excess: absorbed mass does not match Delta(V)-ex");
  return ff;
}

std::vector<long> distinct_finite_dists(const Preflow& pf, const DiGraph& g) {
  std::set<long> ds;
  for (int v = 0; v < g.vertex_slots(); ++v)
    if (g.vertex_alive(v) && !pf.label_zero(v)) ds.insert(pf.dist[v]);
  return {ds.begin(), ds.end()};
}

}  // namespace dygx
