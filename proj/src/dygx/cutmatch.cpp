#include "cutmatch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "flow_kernel.hpp"
#include "scc.hpp"

namespace dygx {

namespace {

Rat cross_weight_of(const DiGraph& g, const std::vector<char>& in_a) {
  Rat w = 0;
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    if (in_a[ed.tail] && !in_a[ed.head]) w += ed.w;
  }
  return w;
}

CutCertificate certify_by_peeling(const DiGraph& w, int n,
                                  const CutMatchOptions& opt) {
  std::vector<int> s = w.vertices();
  while (2 * static_cast<int>(s.size()) >= n) {
    DiGraph h = w.induced(s);
    if (static_cast<int>(s.size()) <= 1) {
      CutCertificate c;
      c.is_cut = false;
      c.cert_set = s;
      c.psi = Rat(Int(1) << 30);
      return c;
    }
    SparsityResult sp = graph_sparsity(h, opt.exhaustive_threshold);
    if (sp.psi > 0) {
      CutCertificate c;
      c.is_cut = false;
      c.cert_set = s;
      c.psi = sp.psi;
      return c;
    }
    std::vector<char> drop(w.vertex_slots(), 0);
    for (int v : sp.argmin_set) drop[v] = 1;
    std::vector<int> next;
    for (int v : s)
      if (!drop[v]) next.push_back(v);
    s = std::move(next);
  }
  throw verify_error("cut_or_certify: peeling fell below n/2 with no cut arm");
}

}  // namespace

CutCertificate cut_or_certify(const DiGraph& w, const Int& d,
                              const CutMatchOptions& opt) {
  (void)d;
  int n = w.num_vertices();
  CutCertificate res;
  if (n <= 1) {
    res.is_cut = false;
    res.cert_set = w.vertices();
    res.psi = Rat(Int(1) << 30);
    return res;
  }
  std::vector<int> verts = w.vertices();
  Rat need_side = opt.balance_fraction * n;
  Rat max_weight = opt.weight_fraction * n;
  if (n <= opt.exhaustive_threshold) {
    unsigned long lim = 1ul << n;
    for (unsigned long mask = 1; mask + 1 < lim; ++mask) {
      int sz = __builtin_popcountl(mask);
      if (Rat(sz) < need_side || Rat(n - sz) < need_side) continue;
      std::vector<char> in_a(w.vertex_slots(), 0);
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) in_a[verts[i]] = 1;
      Rat cw = cross_weight_of(w, in_a);
      if (cw <= max_weight) {
        res.is_cut = true;
        for (int i = 0; i < n; ++i)
          (mask >> i & 1 ? res.a : res.b).push_back(verts[i]);
        res.cross_weight = cw;
        return res;
      }
    }
    return certify_by_peeling(w, n, opt);
  }

  // Sweep heuristic: order vertices by a power-iteration score of the lazy
  // walk on the bidirected support, then try all prefix cuts. A prefix cut
  // that passes the exact weight test is a genuine cut arm; the certify arm
  // is flagged unverified.
  std::vector<double> score(w.vertex_slots(), 0.0);
  std::mt19937_64 rng(opt.seed);
  for (int v : verts)
    score[v] = static_cast<double>(rng() % 1000) / 1000.0 - 0.5;
  std::vector<double> degree(w.vertex_slots(), 0.0);
  for (int e : w.edges()) {
    degree[w.edge(e).tail] += to_double(w.edge(e).w);
    degree[w.edge(e).head] += to_double(w.edge(e).w);
  }
  for (int it = 0; it < opt.sweep_power_iterations; ++it) {
    std::vector<double> next(w.vertex_slots(), 0.0);
    for (int v : verts) next[v] = score[v] / 2;
    for (int e : w.edges()) {
      const Edge& ed = w.edge(e);
      double wt = to_double(ed.w);
      if (degree[ed.tail] > 0)
        next[ed.head] += score[ed.tail] * wt / (2 * degree[ed.tail]);
      if (degree[ed.head] > 0)
        next[ed.tail] += score[ed.head] * wt / (2 * degree[ed.head]);
    }
    double mean = 0;
    for (int v : verts) mean += next[v];
    mean /= n;
    double norm = 0;
    for (int v : verts) {
      next[v] -= mean;
      norm += next[v] * next[v];
    }
    norm = std::sqrt(std::max(norm, 1e-300));
    for (int v : verts) next[v] /= norm;
    score = std::move(next);
  }
  std::vector<int> order = verts;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return score[x] < score[y]; });
  std::vector<char> in_a(w.vertex_slots(), 0);
  for (int k = 1; k < n; ++k) {
    in_a[order[k - 1]] = 1;
    if (Rat(k) < need_side || Rat(n - k) < need_side) continue;
    Rat fwd = cross_weight_of(w, in_a);
    if (fwd <= max_weight) {
      res.is_cut = true;
      res.a.assign(order.begin(), order.begin() + k);
      res.b.assign(order.begin() + k, order.end());
      res.cross_weight = fwd;
      return res;
    }
    // reverse orientation: (B, A) with the prefix as B
    std::vector<char> in_b(w.vertex_slots(), 0);
    for (int i = k; i < n; ++i) in_b[order[i]] = 1;
    Rat bwd = cross_weight_of(w, in_b);
    if (bwd <= max_weight) {
      res.is_cut = true;
      res.a.assign(order.begin() + k, order.end());
      res.b.assign(order.begin(), order.begin() + k);
      res.cross_weight = bwd;
      return res;
    }
  }
  res.is_cut = false;
  res.cert_set = verts;
  res.verified = false;
  // Sampled sparsity estimate over the sweep prefixes (not a certificate).
  res.psi = Rat(-1);
  std::fill(in_a.begin(), in_a.end(), 0);
  for (int k = 1; k < n; ++k) {
    in_a[order[k - 1]] = 1;
    std::vector<int> side(order.begin(), order.begin() + k);
    if (2 * k > n) break;
    EdgeCutView c = cut_measures(w, side);
    Rat psi = c.min_delta() / Rat(k);
    if (res.psi < 0 || psi < res.psi) res.psi = psi;
  }
  return res;
}

MassMatrix::MassMatrix(int n) : n_(n) {
  p_.assign(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i) p_[i][i] = 1;
}

void MassMatrix::apply_round(const DirectedMatching& fwd,
                             const DirectedMatching& bwd) {
  std::vector<std::vector<std::pair<int, Rat>>> incoming(n_);
  std::vector<char> active(n_, 0);
  for (const auto& m : {fwd, bwd})
    for (const auto& arc : m.arcs) {
      incoming[arc.to].push_back({arc.from, arc.w});
      active[arc.to] = 1;
      active[arc.from] = 1;
    }
  for (int s = 0; s < n_; ++s) {
    std::vector<Rat>& row = p_[s];
    std::vector<Rat> next = row;
    for (int v = 0; v < n_; ++v) {
      if (!active[v]) continue;
      Rat acc = row[v] / 2;
      for (const auto& [w, wt] : incoming[v]) acc += wt * row[w] / 2;
      next[v] = acc;
    }
    row = std::move(next);
  }
}

double MassMatrix::row_entropy(int u) const {
  double h = 0;
  for (int v = 0; v < n_; ++v) {
    if (p_[u][v] == 0) continue;
    double x = to_double(p_[u][v]);
    h -= x * std::log2(x);
  }
  return h;
}

double MassMatrix::col_entropy(int u) const {
  double h = 0;
  for (int v = 0; v < n_; ++v) {
    if (p_[v][u] == 0) continue;
    double x = to_double(p_[v][u]);
    h -= x * std::log2(x);
  }
  return h;
}

double MassMatrix::entropy_bits() const {
  double phi = 0;
  for (int u = 0; u < n_; ++u) phi += row_entropy(u) + col_entropy(u);
  return phi;
}

bool MassMatrix::doubly_stochastic() const {
  for (int i = 0; i < n_; ++i) {
    Rat rs = 0, cs = 0;
    for (int j = 0; j < n_; ++j) {
      if (p_[i][j] < 0 || p_[i][j] > 1) return false;
      rs += p_[i][j];
      cs += p_[j][i];
    }
    if (rs != 1 || cs != 1) return false;
  }
  return true;
}

namespace {

void validate_matching(const DirectedMatching& m, const std::vector<int>& from,
                       const std::vector<int>& to, const Rat& unit, int slots) {
  std::vector<Rat> out_w(slots, Rat(0)), in_w(slots, Rat(0));
  std::vector<char> is_from(slots, 0), is_to(slots, 0);
  for (int v : from) is_from[v] = 1;
  for (int v : to) is_to[v] = 1;
  for (const auto& arc : m.arcs) {
    if (!is_from[arc.from] || !is_to[arc.to])
      throw contract_error("matcher: arc endpoints off the terminal sets");
    if (arc.w <= 0 || !is_unit_multiple(arc.w, unit))
      throw contract_error("matcher: arc weight not a positive multiple of 1/d");
    out_w[arc.from] += arc.w;
    in_w[arc.to] += arc.w;
  }
  for (int v : from)
    if (out_w[v] != 1) throw contract_error("matcher: matching not perfect");
  for (int v : to)
    if (in_w[v] != 1) throw contract_error("matcher: matching not perfect");
}

// Terminal sets for a cut round: |A_i| = |B_i| >= ceil(n/4) and either
// A subset A_i or B subset B_i.
std::pair<std::vector<int>, std::vector<int>> choose_terminals(
    const std::vector<int>& a, const std::vector<int>& b,
    const std::vector<int>& all, int n) {
  bool grow_a = a.size() <= b.size();
  const std::vector<int>& small = grow_a ? a : b;
  const std::vector<int>& big = grow_a ? b : a;
  int s = std::max((n + 3) / 4, static_cast<int>(small.size()));
  std::vector<int> big_pick(big.begin(), big.begin() + s);
  std::vector<char> used(*std::max_element(all.begin(), all.end()) + 1, 0);
  std::vector<int> small_grown = small;
  for (int v : small) used[v] = 1;
  for (int v : big_pick) used[v] = 1;
  for (int v : all) {
    if (static_cast<int>(small_grown.size()) >= s) break;
    if (!used[v]) {
      small_grown.push_back(v);
      used[v] = 1;
    }
  }
  if (static_cast<int>(small_grown.size()) != s)
    throw verify_error("play_game: cannot build equal-size terminal sets");
  if (grow_a) return {small_grown, big_pick};
  return {big_pick, small_grown};
}

}  // namespace

GameResult play_game(const std::vector<int>& vertex_ids, const Rat& weight_unit,
                     const MatcherFn& matcher, const CutMatchOptions& opt) {
  GameResult res;
  int n = static_cast<int>(vertex_ids.size());
  int slots = n == 0 ? 0 : *std::max_element(vertex_ids.begin(), vertex_ids.end()) + 1;
  res.w.reset(slots);
  {
    std::vector<char> keep(slots, 0);
    for (int v : vertex_ids) keep[v] = 1;
    for (int v = 0; v < slots; ++v)
      if (!keep[v]) res.w.delete_vertex(v);
  }
  if (n <= 1) {
    res.certified_psi = Rat(Int(1) << 30);
    return res;
  }
  const std::vector<int>& all = vertex_ids;
  int round_cap = static_cast<int>(
      to_long(Int(opt.round_cap_constant) * ceil_log2(Rat(std::max(n, 2)))));
  std::vector<int> dense(slots, -1);
  for (int i = 0; i < n; ++i) dense[vertex_ids[i]] = i;
  MassMatrix mass(n);
  double prev_phi = 0;
  res.min_cut_round_gain_per_n = -1;
  for (int round = 1;; ++round) {
    if (round > round_cap)
      throw verify_error("play_game: round cap exceeded after " +
                         std::to_string(res.rounds.size()) + " rounds");
    CutCertificate cert = cut_or_certify(res.w, rat_den(weight_unit), opt);
    GameRound gr;
    gr.from_cut = cert.is_cut;
    std::vector<int> ai, bi;
    if (cert.is_cut) {
      std::tie(ai, bi) = choose_terminals(cert.a, cert.b, all, n);
    } else {
      // Last round: half of S against the rest. With n odd one vertex stays
      // unmatched; it must already have weighted in- and out-degree >= 1.
      int s = n / 2;
      int leftover = -1;
      if (n % 2 == 1) {
        for (int v : cert.cert_set)
          if (res.w.deg_in(v) >= 1 && res.w.deg_out(v) >= 1) {
            leftover = v;
            break;
          }
        if (leftover < 0)
          for (int v : all)
            if (res.w.deg_in(v) >= 1 && res.w.deg_out(v) >= 1) {
              leftover = v;
              break;
            }
        if (leftover < 0)
          throw verify_error(
              "play_game: no degree-covered vertex to leave unmatched");
      }
      for (int v : cert.cert_set) {
        if (v == leftover) continue;
        if (static_cast<int>(ai.size()) < s) ai.push_back(v);
      }
      std::vector<char> in_a(slots, 0);
      for (int v : ai) in_a[v] = 1;
      for (int v : all)
        if (!in_a[v] && v != leftover && static_cast<int>(bi.size()) < s)
          bi.push_back(v);
    }
    gr.a = ai;
    gr.b = bi;
    auto [fwd, bwd] = matcher(ai, bi);
    validate_matching(fwd, ai, bi, weight_unit, slots);
    validate_matching(bwd, bi, ai, weight_unit, slots);
    for (const auto& arc : fwd.arcs) res.w.add_edge(arc.from, arc.to, arc.w);
    for (const auto& arc : bwd.arcs) res.w.add_edge(arc.from, arc.to, arc.w);
    if (opt.instrument_entropy) {
      DirectedMatching df, db;
      for (const auto& arc : fwd.arcs)
        df.arcs.push_back({dense[arc.from], dense[arc.to], arc.w});
      for (const auto& arc : bwd.arcs)
        db.arcs.push_back({dense[arc.from], dense[arc.to], arc.w});
      mass.apply_round(df, db);
      gr.phi = mass.entropy_bits();
      gr.phi_gain = gr.phi - prev_phi;
      if (gr.phi_gain < -1e-9)
        throw verify_error("play_game: entropy potential decreased");
      if (cert.is_cut) {
        double per_n = gr.phi_gain / n;
        if (res.min_cut_round_gain_per_n < 0 ||
            per_n < res.min_cut_round_gain_per_n)
          res.min_cut_round_gain_per_n = per_n;
      }
      prev_phi = gr.phi;
    }
    gr.fwd = fwd;
    gr.bwd = bwd;
    res.rounds.push_back(std::move(gr));
    if (!cert.is_cut) {
      res.certified_psi = cert.psi;
      res.cert_verified = cert.verified;
      break;
    }
  }
  // the game guarantee: weighted in- and out-degree of every vertex is at least 1.
  for (int v : all)
    if (res.w.deg_in(v) < 1 || res.w.deg_out(v) < 1)
      throw verify_error("play_game: vertex with weighted degree below 1");
  return res;
}

MatcherFn host_flow_matcher(const DiGraph& host) {
  DiGraph host_copy = host;
  return [host_copy](const std::vector<int>& a, const std::vector<int>& b)
             -> std::pair<DirectedMatching, DirectedMatching> {
    auto route = [&](const std::vector<int>& from, const std::vector<int>& to) {
      DiGraph bip(host_copy.vertex_slots());
      std::vector<char> is_from(host_copy.vertex_slots(), 0),
          is_to(host_copy.vertex_slots(), 0);
      for (int v : from) is_from[v] = 1;
      for (int v : to) is_to[v] = 1;
      FlowProblem pi = FlowProblem::zeros(bip);
      for (int e : host_copy.edges()) {
        const Edge& ed = host_copy.edge(e);
        if (is_from[ed.tail] && is_to[ed.head]) {
          bip.add_edge(ed.tail, ed.head, 1);
          pi.cap.push_back(Rat(1));
          pi.cap_inf.push_back(0);
        }
      }
      for (int v : from) pi.delta[v] = 1;
      for (int v : to) pi.sink[v] = 1;
      Preflow pf = bounded_flow(bip, pi, Int(bip.num_vertices()) + 2);
      if (pf.total_excess != 0)
        throw contract_error("host_flow_matcher: no perfect matching exists");
      DirectedMatching m;
      for (int e = 0; e < bip.edge_slots(); ++e)
        if (pf.flow[e] > 0)
          m.arcs.push_back({bip.edge(e).tail, bip.edge(e).head, pf.flow[e]});
      return m;
    };
    return {route(a, b), route(b, a)};
  };
}

UnionSparseResult union_sparse_cuts(const DiGraph& g1,
                                    const std::vector<std::vector<int>>& cuts,
                                    const Rat& psi) {
  DiGraph cur = g1;
  std::vector<int> out_union, in_union;
  size_t total = 0;
  for (const std::vector<int>& s : cuts) {
    if (s.empty()) throw input_error("union_sparse_cuts: empty cut");
    if (2 * s.size() > static_cast<size_t>(cur.num_vertices()))
      throw input_error("union_sparse_cuts: |S_i| > |V(G_i)|/2");
    EdgeCutView view = cut_measures(cur, s);
    bool out_sparse = view.delta_out <= psi * Rat(s.size());
    bool in_sparse = view.delta_in <= psi * Rat(s.size());
    if (!out_sparse && !in_sparse)
      throw input_error("union_sparse_cuts: cut not psi-sparse");
    if (out_sparse)
      out_union.insert(out_union.end(), s.begin(), s.end());
    else
      in_union.insert(in_union.end(), s.begin(), s.end());
    total += s.size();
    std::vector<char> drop(cur.vertex_slots(), 0);
    for (int v : s) drop[v] = 1;
    std::vector<int> keep;
    for (int v : cur.vertices())
      if (!drop[v]) keep.push_back(v);
    cur = cur.induced(keep);
  }
  if (2 * total > static_cast<size_t>(g1.num_vertices()))
    throw input_error("union_sparse_cuts: |union S_i| > |V(G_1)|/2");
  UnionSparseResult res;
  res.out_side = out_union.size() >= in_union.size();
  res.set = res.out_side ? out_union : in_union;
  EdgeCutView final_view = cut_measures(g1, res.set);
  res.sparsity = final_view.min_delta() / Rat(res.set.size());
  if (res.sparsity > 3 * psi)
    throw verify_error("union_sparse_cuts: result sparsity exceeds 3*psi");
  return res;
}

StaticDecomposition static_decompose(const DiGraph& g, const Rat& phi,
                                     const ExpanderCheckOptions& opt) {
  StaticDecomposition res;
  std::vector<std::vector<int>> work{g.vertices()};
  while (!work.empty()) {
    std::vector<int> part = std::move(work.back());
    work.pop_back();
    if (part.empty()) continue;
    DiGraph h = g.induced(part);
    VertexExpanderCheck chk = check_vertex_expander(h, phi, opt);
    if (chk.certified) {
      res.blocks.push_back(std::move(part));
      continue;
    }
    const VertexCutView& cut = *chk.witness_cut;
    res.removed.insert(res.removed.end(), cut.sep.begin(), cut.sep.end());
    work.push_back(cut.left);
    work.push_back(cut.right);
  }
  // Contract blocks, drop removed vertices, and demand a DAG.
  std::vector<int> block_of(g.vertex_slots(), -1);
  for (size_t i = 0; i < res.blocks.size(); ++i)
    for (int v : res.blocks[i]) block_of[v] = static_cast<int>(i);
  int k = static_cast<int>(res.blocks.size());
  std::vector<std::vector<int>> adj(k);
  std::vector<int> indeg(k, 0);
  for (int e : g.edges()) {
    int a = block_of[g.edge(e).tail], b = block_of[g.edge(e).head];
    if (a < 0 || b < 0 || a == b) continue;
    adj[a].push_back(b);
    ++indeg[b];
  }
  std::deque<int> q;
  for (int i = 0; i < k; ++i)
    if (indeg[i] == 0) q.push_back(i);
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    res.topo_order.push_back(u);
    for (int v : adj[u])
      if (--indeg[v] == 0) q.push_back(v);
  }
  if (static_cast<int>(res.topo_order.size()) != k)
    throw verify_error("static_decompose: contracted graph is not a DAG");
  return res;
}

}  // namespace dygx
