#include "path_oracle.hpp"

#include <algorithm>
#include <deque>

#include "estree.hpp"
#include "flow_kernel.hpp"
#include "flow_routines.hpp"
#include "cuts.hpp"
#include "vertex_flow.hpp"

namespace dygx {

TerminalMatchingResult terminal_matching(const DiGraph& g,
                                         const std::vector<int>& a,
                                         const std::vector<int>& b,
                                         const Rat& phi) {
  if (a.size() != b.size())
    throw input_error("terminal_matching: need |A| = |B|");
  if (phi <= 0 || phi > 1) throw input_error("terminal_matching: bad phi");
  TerminalMatchingResult res;
  std::vector<int> rem_a = a, rem_b = b;
  Rat cap = Rat(ceil_rat(2 / phi));
  Rat total_cap = cap * g.num_edges();
  Int h = ceil_rat(Rat(40 * ceil_log2(std::max(total_cap, Rat(2)))) / phi);
  if (h < 2) h = 2;
  res.length_bound = 2 * h;
  long cap_rounds = to_long(ceil_log2(Rat(std::max(g.num_edges(), 2)))) + 5;
  long rounds = 0;
  std::vector<Rat> eload(g.edge_slots(), Rat(0));
  while (!rem_a.empty()) {
    if (++rounds > cap_rounds)
      throw contract_error(
          "terminal_matching: rounds exhausted; expander promise violated?");
    FlowProblem pi = FlowProblem::zeros(g);
    for (int e = 0; e < g.edge_slots(); ++e) pi.cap[e] = cap;
    for (int v : rem_a) pi.delta[v] = 1;
    for (int v : rem_b) pi.sink[v] = 1;
    FlowOrCut fc = global_flow(g, pi, Rat(0), h);
    if (!fc.routed())
      throw contract_error(
          "terminal_matching: flow starved; expander promise violated");
    PathDecomposition dec = decompose(g, *fc.preflow);
    std::vector<char> matched_a(g.vertex_slots(), 0), matched_b(g.vertex_slots(), 0);
    for (FlowPath& p : dec.paths) {
      if (Int(p.edge_ids.size()) > 2 * h) continue;  // keep the short half
      int src = p.vertices.front(), dst = p.vertices.back();
      if (matched_a[src] || matched_b[dst]) continue;
      if (p.val != 1)
        throw verify_error("terminal_matching: non-unit path value");
      matched_a[src] = matched_b[dst] = 1;
      EmbeddedPath ep;
      ep.vertices = std::move(p.vertices);
      ep.edge_ids = std::move(p.edge_ids);
      ep.val = 1;
      ep.index_vertices();
      for (int e : ep.edge_ids) eload[e] += 1;
      res.matching.emplace_back(src, dst);
      res.embedding.push_back(std::move(ep));
    }
    std::vector<int> na, nb;
    for (int v : rem_a)
      if (!matched_a[v]) na.push_back(v);
    for (int v : rem_b)
      if (!matched_b[v]) nb.push_back(v);
    if (na.size() == rem_a.size())
      throw contract_error("terminal_matching: no progress in a round");
    rem_a = std::move(na);
    rem_b = std::move(nb);
  }
  res.congestion_bound = Rat(rounds) * cap;
  for (int e : g.edges())
    if (eload[e] > res.congestion_bound)
      throw verify_error("terminal_matching: congestion audit failed");
  return res;
}

Witness terminal_witness(const DiGraph& g, const std::vector<int>& terminals,
                         const Rat& phi, const CutMatchOptions& opt) {
  struct Rec {
    std::vector<EmbeddedPath> paths;
  };
  std::vector<Rec> recs;
  MatcherFn matcher = [&](const std::vector<int>& ai,
                          const std::vector<int>& bi)
      -> std::pair<DirectedMatching, DirectedMatching> {
    auto run = [&](const std::vector<int>& from, const std::vector<int>& to) {
      TerminalMatchingResult tm = terminal_matching(g, from, to, phi);
      Rec rec;
      DirectedMatching m;
      for (EmbeddedPath& p : tm.embedding) {
        m.arcs.push_back({p.vertices.front(), p.vertices.back(), Rat(1)});
        rec.paths.push_back(std::move(p));
      }
      recs.push_back(std::move(rec));
      return m;
    };
    DirectedMatching fwd = run(ai, bi);
    DirectedMatching bwd = run(bi, ai);
    return {fwd, bwd};
  };
  GameResult game = play_game(terminals, Rat(1), matcher, opt);
  Witness w;
  w.weight_unit = 1;
  int slots = g.vertex_slots();
  w.w.reset(slots);
  std::vector<char> is_terminal(slots, 0);
  for (int t : terminals) is_terminal[t] = 1;
  for (int v = 0; v < slots; ++v)
    if (!is_terminal[v] && w.w.vertex_alive(v)) w.w.delete_vertex(v);
  for (Rec& rec : recs)
    for (EmbeddedPath& p : rec.paths) {
      int id = w.w.add_edge(p.vertices.front(), p.vertices.back(), 1);
      p.witness_edge = id;
      w.embedding.paths.push_back(std::move(p));
    }
  w.certified_psi = game.certified_psi;
  w.verified = game.cert_verified;
  return w;
}

// ----------------------------------------------------------------------------

struct PathOracle::Level {
  int index = 1;  // i, with q at the top and 1 at the bottom
  DiGraph g0;     // level graph (edges deleted as updates cascade)
  std::optional<PruneState> prune;
  long child_deletions = 0;
  long child_budget = 1;
  // middle levels
  std::optional<IncidenceGraph> subdiv;
  std::optional<Witness> child_witness;
  std::vector<std::vector<int>> paths_by_witness_edge;  // handled via embedding
  std::optional<ESTree> t_in, t_out;
  int helper = -1;
  // bottom level
  int root = -1;
  std::vector<int> next_to_root, prev_from_root;     // parent vertex arrays
  std::vector<int> next_edge_to_root, prev_edge_from_root;

  std::vector<int> core() const {
    std::vector<int> c;
    std::vector<char> out(g0.vertex_slots(), 0);
    for (int v : prune->pruned()) out[v] = 1;
    for (int v : g0.vertices())
      if (!out[v]) c.push_back(v);
    return c;
  }
};

PathOracle::~PathOracle() = default;
PathOracle::PathOracle(PathOracle&&) noexcept = default;
PathOracle& PathOracle::operator=(PathOracle&&) noexcept = default;

PathOracle::PathOracle(const DiGraph& w, const Rat& phi, PathOracleOptions opt)
    : w0_(w), phi_(phi), opt_(std::move(opt)) {
  if (opt_.levels < 1 || opt_.levels > 3)
    throw input_error("PathOracle: q must lie in [1, 3]");
  for (int e : w0_.edges())
    if (w0_.edge(e).w != 1) throw input_error("PathOracle: graph must be unweighted");
  removed_.assign(w0_.vertex_slots(), 0);
  auto top = std::make_unique<Level>();
  top->index = opt_.levels;
  top->g0 = w0_;
  PruneOptions popt;
  popt.level_param =
      opt_.level_param > 0
          ? opt_.level_param
          : choose_level_param(Int(std::max(w0_.num_vertices(), 2)), phi_);
  popt.check_invariants = false;
  top->prune.emplace(top->g0, phi_, popt);
  levels_.push_back(std::move(top));
  grow_level(0);
}

void PathOracle::grow_level(int idx) {
  Level& lv = *levels_[idx];
  levels_.resize(idx + 1);
  lv.child_deletions = 0;
  // Rebuild the level's queryструктура from the current pruned core.
  std::vector<int> core = lv.core();
  DiGraph cur = lv.g0.induced(core);
  if (lv.index == 1) {
    // Bottom: one BFS tree pair from an arbitrary root.
    lv.subdiv.reset();
    lv.child_witness.reset();
    lv.t_in.reset();
    lv.t_out.reset();
    lv.root = core.empty() ? -1 : core.front();
    int slots = cur.vertex_slots();
    lv.next_to_root.assign(slots, -1);
    lv.prev_from_root.assign(slots, -1);
    lv.next_edge_to_root.assign(slots, -1);
    lv.prev_edge_from_root.assign(slots, -1);
    if (lv.root < 0) return;
    std::deque<int> q{lv.root};
    std::vector<char> seen(slots, 0);
    seen[lv.root] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int e : cur.out_edges(u)) {
        int w = cur.edge(e).head;
        if (seen[w]) continue;
        seen[w] = 1;
        lv.prev_from_root[w] = u;
        lv.prev_edge_from_root[w] = e;
        q.push_back(w);
      }
    }
    std::fill(seen.begin(), seen.end(), 0);
    q.push_back(lv.root);
    seen[lv.root] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int e : cur.in_edges(u)) {
        int w = cur.edge(e).tail;
        if (seen[w]) continue;
        seen[w] = 1;
        lv.next_to_root[w] = u;
        lv.next_edge_to_root[w] = e;
        q.push_back(w);
      }
    }
    return;
  }
  // Middle level: subdivide, pick F, embed a terminal witness, spawn child.
  lv.subdiv = incidence_of(cur);
  std::vector<int> host_edges = cur.edges();
  Int want = ceil_pow_frac(Int(std::max<long>(w0_.num_edges(), 2)),
                           Int(lv.index - 1), Int(opt_.levels));
  long f_count = std::min<long>(static_cast<long>(host_edges.size()),
                                std::max<long>(2, to_long(want)));
  std::vector<int> terminals;
  for (long k = 0; k < f_count; ++k)
    terminals.push_back(lv.subdiv->hyper_vertex[host_edges[k]]);
  Rat gamma = lv.prune->gamma();
  Witness cw = terminal_witness(lv.subdiv->graph, terminals, gamma, opt_.game);
  lv.child_witness = std::move(cw);
  // ES trees on the subdivided graph rooted at the terminal set via a helper.
  DiGraph gs = lv.subdiv->graph;
  lv.helper = gs.add_vertex();
  for (int t : terminals) {
    gs.add_edge(lv.helper, t, 1);
    gs.add_edge(t, lv.helper, 1);
  }
  long cap = gs.num_vertices() + 1;
  lv.t_out.emplace(gs, lv.helper, cap, false);
  lv.t_in.emplace(gs, lv.helper, cap, true);

  auto child = std::make_unique<Level>();
  child->index = lv.index - 1;
  child->g0 = lv.child_witness->w;
  PruneOptions popt;
  popt.level_param = opt_.level_param > 0
                         ? opt_.level_param
                         : choose_level_param(
                               Int(std::max(child->g0.num_vertices(), 2)),
                               Rat(1, 4));
  popt.check_invariants = false;
  Rat child_phi = lv.child_witness->certified_psi;
  if (child_phi <= 0 || child_phi > Rat(1, 2)) child_phi = Rat(1, 4);
  child->prune.emplace(child->g0, child_phi, popt);
  Rat budget = child->prune->gamma() * child->g0.total_volume() /
               Rat(ceil_pow_frac(Int(std::max(w0_.num_vertices(), 2)), 1,
                                 Int(popt.level_param)));
  lv.child_budget = std::max<long>(1, to_long(floor_rat(budget)));
  levels_.push_back(std::move(child));
  grow_level(idx + 1);
}

void PathOracle::delete_in_level(int idx, const std::vector<int>& edges) {
  Level& lv = *levels_[idx];
  std::vector<int> dnew;
  for (int e : edges) {
    if (!lv.prune->current().edge_alive(e)) continue;
    std::vector<int> x = lv.prune->delete_edge(e);
    dnew.push_back(e);
    for (int v : x)
      for (int ie : lv.prune->current().out_edges(v)) dnew.push_back(ie);
    for (int v : x)
      for (int ie : lv.prune->current().in_edges(v)) dnew.push_back(ie);
    lv.g0.delete_edge(e);
  }
  if (lv.index == 1) {
    grow_level(idx);  // recompute the bottom BFS trees
    return;
  }
  if (dnew.empty()) return;
  // Cascade: kill the subdivision nodes of the gone edges, and with them the
  // child witness edges whose embedding paths used them.
  std::vector<int> child_edges;
  std::vector<char> gone_x(lv.subdiv->graph.vertex_slots(), 0);
  for (int e : dnew) {
    int x = lv.subdiv->hyper_vertex[e];
    if (x >= 0 && !gone_x[x]) gone_x[x] = 1;
  }
  for (const EmbeddedPath& p : lv.child_witness->embedding.paths) {
    if (p.witness_edge < 0 || !levels_[idx + 1]->g0.edge_alive(p.witness_edge))
      continue;
    bool dead = false;
    for (int v : p.vertices)
      if (gone_x[v]) {
        dead = true;
        break;
      }
    if (dead) child_edges.push_back(p.witness_edge);
  }
  for (size_t x = 0; x < gone_x.size(); ++x)
    if (gone_x[x]) {
      lv.t_in->delete_vertex(static_cast<int>(x));
      lv.t_out->delete_vertex(static_cast<int>(x));
    }
  lv.child_deletions += static_cast<long>(child_edges.size());
  if (lv.child_deletions > lv.child_budget) {
    grow_level(idx);
    return;
  }
  if (!child_edges.empty()) delete_in_level(idx + 1, child_edges);
}

void PathOracle::delete_batch(const std::vector<int>& edges,
                              const std::vector<int>& vertices) {
  std::vector<int> all = edges;
  for (int v : vertices) {
    if (removed_[v]) continue;
    removed_[v] = 1;
    const DiGraph& cur = levels_[0]->prune->current();
    for (int e : cur.out_edges(v)) all.push_back(e);
    for (int e : cur.in_edges(v)) all.push_back(e);
  }
  delete_in_level(0, all);
}

bool PathOracle::usable(int v) const {
  if (v < 0 || v >= w0_.vertex_slots() || removed_[v]) return false;
  const std::vector<int> pruned = levels_[0]->prune->pruned();
  for (int p : pruned)
    if (p == v) return false;
  return w0_.vertex_alive(v);
}

const DiGraph& PathOracle::current() const {
  return levels_[0]->prune->current();
}

Rat PathOracle::pruned_volume() const {
  return levels_[0]->prune->pruned_volume_initial();
}

std::vector<int> PathOracle::simple_extract(const std::vector<int>& walk) const {
  // Keep a stack; on revisiting a vertex, pop the loop.
  std::vector<int> stack;
  std::vector<int> pos(w0_.vertex_slots() + 8, -1);
  std::vector<int> slot_of;
  for (int v : walk) {
    if (v < static_cast<int>(pos.size()) && pos[v] >= 0) {
      while (static_cast<int>(stack.size()) > pos[v] + 1) {
        pos[stack.back()] = -1;
        stack.pop_back();
      }
      continue;
    }
    pos[v] = static_cast<int>(stack.size());
    stack.push_back(v);
  }
  return stack;
}

std::vector<int> PathOracle::query_level(int idx, int u, int v) {
  Level& lv = *levels_[idx];
  if (lv.index == 1) {
    if (u == v) return {};
    std::vector<int> edges;
    int cur = u;
    long guard = 0;
    while (cur != lv.root) {
      int e = lv.next_edge_to_root[cur];
      if (e < 0) throw contract_error("PathOracle: bottom tree does not span");
      edges.push_back(e);
      cur = lv.next_to_root[cur];
      ++steps_;
      if (++guard > lv.g0.vertex_slots() + 2)
        throw verify_error("PathOracle: bottom tree loop");
    }
    std::vector<int> back;
    cur = v;
    guard = 0;
    while (cur != lv.root) {
      int e = lv.prev_edge_from_root[cur];
      if (e < 0) throw contract_error("PathOracle: bottom tree does not span");
      back.push_back(e);
      cur = lv.prev_from_root[cur];
      ++steps_;
      if (++guard > lv.g0.vertex_slots() + 2)
        throw verify_error("PathOracle: bottom tree loop");
    }
    edges.insert(edges.end(), back.rbegin(), back.rend());
    return edges;
  }
  // Middle level: subdivided walk u -> u' -> ... -> v' -> v.
  if (!lv.t_in->in_tree(u) || !lv.t_out->in_tree(v))
    throw contract_error("PathOracle: vertex fell out of the level trees");
  std::vector<int> walk_in = lv.t_in->path_to_root(u);    // u .. helper
  walk_in.pop_back();                                     // u .. u'
  std::vector<int> walk_out = lv.t_out->path_to_root(v);  // v .. helper
  walk_out.pop_back();
  std::reverse(walk_out.begin(), walk_out.end());  // v' .. v
  steps_ += static_cast<long>(walk_in.size() + walk_out.size());
  int up = walk_in.back(), vp = walk_out.front();
  std::vector<int> child_edges = query_level(idx + 1, up, vp);
  // Expand child witness edges into subdivided walks and splice.
  std::vector<int> full = walk_in;
  const Embedding& emb = lv.child_witness->embedding;
  // map witness edge -> embedding path index
  for (int ce : child_edges) {
    const EmbeddedPath* path = nullptr;
    for (const EmbeddedPath& p : emb.paths)
      if (p.witness_edge == ce) {
        path = &p;
        break;
      }
    if (!path) throw verify_error("PathOracle: missing embedding path");
    if (path->vertices.front() != full.back())
      throw verify_error("PathOracle: embedding path misaligned");
    full.insert(full.end(), path->vertices.begin() + 1, path->vertices.end());
    steps_ += static_cast<long>(path->vertices.size());
  }
  if (full.back() != vp) throw verify_error("PathOracle: child walk misaligned");
  full.insert(full.end(), walk_out.begin() + 1, walk_out.end());
  // Convert the subdivided walk into level-graph edge ids: each interior
  // x-node traversed tail -> x -> head stands for its edge.
  std::vector<int> out;
  int host_slots = lv.subdiv->host_slots;
  for (size_t i = 0; i + 1 < full.size(); ++i) {
    int a = full[i], x = full[i + 1];
    if (x < host_slots) continue;  // real vertex; edges come from x nodes
    if (i + 2 >= full.size())
      throw verify_error("PathOracle: walk ends on a subdivision node");
    int b = full[i + 2];
    int e = lv.subdiv->edge_list[x - host_slots];
    const Edge& ed = lv.g0.edge(e);
    if (ed.tail != a || ed.head != b)
      throw verify_error("PathOracle: subdivision traversal mismatch");
    out.push_back(e);
  }
  return out;
}

PathOracle::Query PathOracle::query(int u, int v) {
  if (!usable(u) || !usable(v))
    throw input_error("PathOracle: query endpoint unavailable");
  auto run = [&](int s, int t) {
    std::vector<int> edges = query_level(0, s, t);
    std::vector<int> walk{s};
    const DiGraph& cur = levels_[0]->prune->current();
    for (int e : edges) {
      if (!cur.edge_alive(e))
        throw verify_error("PathOracle: returned edge not alive");
      if (cur.edge(e).tail != walk.back())
        throw verify_error("PathOracle: returned walk disconnected");
      walk.push_back(cur.edge(e).head);
    }
    if (walk.back() != t) throw verify_error("PathOracle: walk endpoint wrong");
    return simple_extract(walk);
  };
  Query q;
  q.forward = run(u, v);
  q.backward = run(v, u);
  return q;
}

}  // namespace dygx
