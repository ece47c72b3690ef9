#include "witness.hpp"

#include <algorithm>

#include "flow_kernel.hpp"
#include "flow_routines.hpp"
#include "vertex_flow.hpp"

namespace dygx {

void EmbeddedPath::index_vertices() {
  position.clear();
  for (size_t i = 0; i < vertices.size(); ++i)
    position.emplace(vertices[i], static_cast<int>(i));
}

Rat Embedding::vertex_congestion(int v) const {
  Rat s = 0;
  for (const EmbeddedPath& p : paths)
    if (p.position.count(v)) s += p.val;
  return s;
}

Rat Embedding::edge_load(int host_edge) const {
  Rat s = 0;
  for (const EmbeddedPath& p : paths)
    for (int e : p.edge_ids)
      if (e == host_edge) s += p.val;
  return s;
}

EmbedMatchingResult embed_matching(const DiGraph& g,
                                   const std::vector<Rat>& kappa,
                                   const std::vector<int>& a,
                                   const std::vector<int>& b, const Rat& phi,
                                   const Rat& eps, const Rat& d) {
  int n = g.num_vertices();
  std::vector<char> in_a(g.vertex_slots(), 0), in_b(g.vertex_slots(), 0);
  for (int v : a) in_a[v] = 1;
  for (int v : b) {
    if (in_a[v]) throw input_error("embed_matching: A and B overlap");
    in_b[v] = 1;
  }
  if (4 * a.size() < static_cast<size_t>(n) || a.size() > b.size())
    throw input_error("embed_matching: need n/4 <= |A| <= |B|");
  if (phi <= 0 || phi >= Rat(1))
    throw input_error("embed_matching: phi out of range");
  Rat unit = 1 / d;
  if (!is_unit_multiple(Rat(1), unit) || !is_unit_multiple(1 / phi, unit))
    throw input_error("embed_matching: 1 and 1/phi must sit on the 1/d grid");
  for (int e : g.edges()) {
    if (kappa[e] < unit || kappa[e] > 1 / phi ||
        !is_unit_multiple(kappa[e], unit))
      throw input_error("embed_matching: kappa out of [1/d, 1/phi] grid");
  }

  // Vertex-split graph: in(v) = v, out(v) = slots + v.
  int base = g.vertex_slots();
  DiGraph gp(2 * base);
  for (int v = 0; v < base; ++v)
    if (!g.vertex_alive(v)) {
      gp.delete_vertex(v);
      gp.delete_vertex(base + v);
    }
  FlowProblem pi = FlowProblem::zeros(gp, unit);
  std::vector<int> host_edge_of;  // per split edge id
  for (int v : g.vertices()) {
    gp.add_edge(v, base + v, 1);
    pi.cap.push_back(1 / phi);
    pi.cap_inf.push_back(0);
    host_edge_of.push_back(-1);
  }
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    gp.add_edge(base + ed.tail, ed.head, 1);
    pi.cap.push_back(kappa[e]);
    pi.cap_inf.push_back(0);
    host_edge_of.push_back(e);
  }
  for (int v : a) pi.delta[v] = 1;
  for (int v : b) pi.sink[base + v] = 1;
  Rat z = 2 * eps * Rat(n);
  Rat total_cap = pi.total_cap();
  Int h = ceil_rat(total_cap * Rat(10 * ceil_log2(total_cap)) / (eps * Rat(n)));
  if (h < 2) h = 2;

  Preflow pf = bounded_flow(gp, pi, h);
  EmbedMatchingResult res;
  if (pf.total_excess <= z) {
    res.has_paths = true;
    PathDecomposition dec = decompose(gp, pf);
    Rat len_cap = 4 * Rat(h) / eps;
    Rat total = 0;
    for (const FlowPath& p : dec.paths) {
      if (Rat(p.edge_ids.size()) >= len_cap) continue;  // P_long filtered
      EmbeddedPath ep;
      ep.val = p.val;
      for (size_t i = 0; i < p.vertices.size(); ++i) {
        int node = p.vertices[i];
        int host = node < base ? node : node - base;
        if (ep.vertices.empty() || ep.vertices.back() != host)
          ep.vertices.push_back(host);
      }
      for (size_t i = 0; i < p.edge_ids.size(); ++i) {
        int he = host_edge_of[p.edge_ids[i]];
        if (he >= 0) ep.edge_ids.push_back(he);
      }
      if (ep.vertices.size() != ep.edge_ids.size() + 1)
        throw verify_error("embed_matching: malformed host path");
      if (!in_a[ep.vertices.front()] || !in_b[ep.vertices.back()])
        throw verify_error("embed_matching: path endpoints off A/B");
      if (!is_unit_multiple(ep.val, unit))
        throw verify_error("embed_matching: path value not a multiple of 1/d");
      ep.index_vertices();
      total += ep.val;
      res.paths.push_back(std::move(ep));
    }
    if (total < (1 - 10 * eps) * Rat(a.size()))
      throw verify_error("embed_matching: kept value below (1-10eps)|A|");
    // congestion audits (properties 2d, 2e)
    std::vector<Rat> vload(g.vertex_slots(), Rat(0));
    std::vector<Rat> eload(g.edge_slots(), Rat(0));
    for (const EmbeddedPath& p : res.paths) {
      for (int v : p.vertices) vload[v] += p.val;
      for (int e : p.edge_ids) eload[e] += p.val;
    }
    for (int v : g.vertices())
      if (vload[v] > 1 / phi)
        throw verify_error("embed_matching: vertex congestion above 1/phi");
    for (int e : g.edges())
      if (eload[e] > kappa[e])
        throw verify_error("embed_matching: edge load above kappa");
    return res;
  }

  // Bottleneck cut: scan the level prefixes for one satisfying both the
  // level-cut inequality and the mapped partition bound. The
  // |L| <= n/2 normalization can be unattainable (the level cut does not bound the
  // cut side), so candidates violating only it are kept as a fallback.
  Rat log_term = Rat(10 * ceil_log2(total_cap)) / Rat(h);
  int np = gp.num_vertices();
  std::optional<EmbedMatchingResult> fallback;
  for (long dcap : distinct_finite_dists(pf, gp)) {
    std::vector<char> in_s(gp.vertex_slots(), 0);
    int cnt = 0;
    for (int v : gp.vertices())
      if (!pf.label_zero(v) && pf.dist[v] <= dcap) {
        in_s[v] = 1;
        ++cnt;
      }
    if (cnt == 0 || cnt == np) continue;
    if (!(Rat(cnt) > z) || !(Rat(np - cnt) > z)) continue;
    Rat cap_cut = cut_capacity_out(gp, pi, in_s);
    Rat ds = 0, ts = 0;
    for (int v : gp.vertices())
      if (in_s[v]) {
        ds += pi.delta[v];
        ts += pi.sink[v];
      }
    Rat vol_in = cap_volume(gp, pi, in_s, true);
    Rat vol_out = cap_volume(gp, pi, in_s, false);
    if (!(cap_cut <= ds - ts - z + std::min(vol_in, vol_out) * log_term))
      continue;
    // Map to (L, S, R) on the host.
    std::vector<int> L, S, R;
    for (int v : g.vertices()) {
      bool vin = in_s[v], vout = in_s[base + v];
      if (vin && vout)
        L.push_back(v);
      else if (vin)
        S.push_back(v);
      else
        R.push_back(v);
    }
    if (!(Rat(L.size()) >= eps * Rat(n))) continue;
    std::vector<char> lmask(g.vertex_slots(), 0), rmask(g.vertex_slots(), 0);
    for (int v : L) lmask[v] = 1;
    for (int v : R) rmask[v] = 1;
    Rat klr = 0;
    for (int e : g.edges()) {
      const Edge& ed = g.edge(e);
      if (lmask[ed.tail] && rmask[ed.head]) klr += kappa[e];
    }
    Rat lhs = klr + Rat(S.size()) / (2 * phi);
    Rat rhs = Rat(L.size()) - eps * Rat(n);
    if (!(lhs <= rhs)) continue;
    EmbedMatchingResult cand;
    cand.left = std::move(L);
    cand.sep = std::move(S);
    cand.right = std::move(R);
    cand.cut_lhs = lhs;
    cand.cut_rhs = rhs;
    if (2 * cand.left.size() <= static_cast<size_t>(n)) return cand;
    if (!fallback) fallback = std::move(cand);
  }
  if (fallback) return *fallback;
  throw verify_error("embed_matching: no level cut satisfies both bounds");
}

namespace {

struct MatcherAbort {
  std::vector<int> left, sep, right;
  Rat lhs, rhs;
};

// Completes a (fractional) matching to a perfect one with fake arcs in
// weight_unit quanta, pairing leftover supply and demand greedily.
DirectedMatching make_fakes(const std::vector<int>& a, const std::vector<int>& b,
                            const std::vector<Rat>& out_w,
                            const std::vector<Rat>& in_w) {
  DirectedMatching fakes;
  std::vector<std::pair<int, Rat>> need_a, need_b;
  for (int v : a)
    if (out_w[v] < 1) need_a.push_back({v, 1 - out_w[v]});
  for (int v : b)
    if (in_w[v] < 1) need_b.push_back({v, 1 - in_w[v]});
  size_t i = 0, j = 0;
  while (i < need_a.size() && j < need_b.size()) {
    Rat amount = std::min(need_a[i].second, need_b[j].second);
    fakes.arcs.push_back({need_a[i].first, need_b[j].first, amount});
    need_a[i].second -= amount;
    need_b[j].second -= amount;
    if (need_a[i].second == 0) ++i;
    if (need_b[j].second == 0) ++j;
  }
  if (i < need_a.size() || j < need_b.size())
    throw verify_error("fake matching: supply and demand do not balance");
  return fakes;
}


}  // namespace

EmbedWitnessResult embed_witness(const DiGraph& g, const std::vector<Rat>& kappa,
                                 const Rat& phi, const Rat& d,
                                 const WitnessOptions& opt) {
  std::vector<int> verts = g.vertices();
  int n = static_cast<int>(verts.size());
  Rat unit = 1 / d;
  Int l2 = std::max(Int(1), ceil_log2(Rat(std::max(n, 2))));
  Rat eps_wit = opt.eps_wit.value_or(Rat(1) / Rat(4 * l2 * l2));

  struct RoundRecord {
    std::vector<EmbeddedPath> paths;  // real arcs, one witness edge per path
    DirectedMatching fakes;
  };
  std::vector<RoundRecord> records;
  MatcherFn matcher = [&](const std::vector<int>& ai,
                          const std::vector<int>& bi)
      -> std::pair<DirectedMatching, DirectedMatching> {
    auto run = [&](const std::vector<int>& from, const std::vector<int>& to) {
      EmbedMatchingResult em = embed_matching(g, kappa, from, to, phi, eps_wit, d);
      if (!em.has_paths)
        throw MatcherAbort{em.left, em.sep, em.right, em.cut_lhs, em.cut_rhs};
      RoundRecord rec;
      DirectedMatching m;
      std::vector<Rat> out_w(g.vertex_slots(), Rat(0)), in_w(g.vertex_slots(), Rat(0));
      for (EmbeddedPath& p : em.paths) {
        m.arcs.push_back({p.vertices.front(), p.vertices.back(), p.val});
        out_w[p.vertices.front()] += p.val;
        in_w[p.vertices.back()] += p.val;
        rec.paths.push_back(std::move(p));
      }
      rec.fakes = make_fakes(from, to, out_w, in_w);
      for (const auto& arc : rec.fakes.arcs) m.arcs.push_back(arc);
      records.push_back(std::move(rec));
      return m;
    };
    DirectedMatching fwd = run(ai, bi);
    DirectedMatching bwd = run(bi, ai);
    return {fwd, bwd};
  };

  EmbedWitnessResult res;
  GameResult game;
  try {
    game = play_game(verts, unit, matcher, opt.game);
  } catch (const MatcherAbort& abort) {
    res.left = abort.left;
    res.sep = abort.sep;
    res.right = abort.right;
    res.cut_lhs = abort.lhs;
    res.cut_rhs = abort.rhs;
    return res;
  }

  // Rebuild W* with explicit real/fake bookkeeping.
  int slots = g.vertex_slots();
  DiGraph wstar(slots);
  for (int v = 0; v < slots; ++v)
    if (!g.vertex_alive(v)) wstar.delete_vertex(v);
  std::vector<EmbeddedPath> path_of_edge;  // indexed by wstar edge id
  std::vector<char> is_fake;
  for (RoundRecord& rec : records) {
    for (EmbeddedPath& p : rec.paths) {
      int id = wstar.add_edge(p.vertices.front(), p.vertices.back(), p.val);
      p.witness_edge = id;
      path_of_edge.push_back(p);
      is_fake.push_back(0);
    }
    for (const auto& arc : rec.fakes.arcs) {
      wstar.add_edge(arc.from, arc.to, arc.w);
      path_of_edge.push_back({});
      is_fake.push_back(1);
    }
  }

  // Unweighted multigraph W_u: d*w(e) copies per edge; prune the fakes away.
  DiGraph wu(slots);
  for (int v = 0; v < slots; ++v)
    if (!g.vertex_alive(v)) wu.delete_vertex(v);
  std::vector<std::vector<int>> copies(wstar.edge_slots());
  std::vector<int> fake_units;
  for (int e = 0; e < wstar.edge_slots(); ++e) {
    const Edge& ed = wstar.edge(e);
    Rat count = ed.w * d;
    if (!is_integral(count))
      throw verify_error("embed_witness: weight not a multiple of 1/d");
    long c = to_long(rat_num(count));
    for (long k = 0; k < c; ++k) {
      int uid = wu.add_edge(ed.tail, ed.head, 1);
      copies[e].push_back(uid);
      if (is_fake[e]) fake_units.push_back(uid);
    }
  }
  Rat phi_prune = measured_edge_expansion(wu, opt.verify_threshold);
  std::vector<int> pruned_all;
  if (!fake_units.empty() && phi_prune > 0) {
    PruneOptions popt;
    popt.level_param = choose_level_param(Int(n), phi_prune);
    popt.check_invariants = false;
    PruneState prune(wu, phi_prune, popt);
    for (int uid : fake_units) {
      std::vector<int> x = prune.delete_edge(uid);
      pruned_all.insert(pruned_all.end(), x.begin(), x.end());
    }
  }

  std::vector<char> dropped(slots, 0);
  for (int v : pruned_all) dropped[v] = 1;
  Witness w;
  w.weight_unit = unit;
  w.w.reset(slots);
  for (int v = 0; v < slots; ++v)
    if (!g.vertex_alive(v) || dropped[v]) {
      if (v < w.w.vertex_slots() && w.w.vertex_alive(v)) w.w.delete_vertex(v);
    }
  for (int e = 0; e < wstar.edge_slots(); ++e) {
    if (is_fake[e]) continue;
    const Edge& ed = wstar.edge(e);
    if (dropped[ed.tail] || dropped[ed.head]) continue;
    int nid = w.w.add_edge(ed.tail, ed.head, ed.w);
    EmbeddedPath p = path_of_edge[e];
    p.witness_edge = nid;
    w.embedding.paths.push_back(std::move(p));
  }
  // Property 2a audit: per-edge load at most 2R * kappa(e).
  long rounds = static_cast<long>(game.rounds.size());
  std::vector<Rat> eload(g.edge_slots(), Rat(0));
  for (const EmbeddedPath& p : w.embedding.paths)
    for (int e : p.edge_ids) eload[e] += p.val;
  for (int e : g.edges())
    if (eload[e] > 2 * Rat(rounds) * kappa[e])
      throw verify_error("embed_witness: edge congestion above 2R*kappa");
  if (w.w.num_vertices() <= opt.verify_threshold) {
    SparsityResult sp = graph_sparsity(w.w, opt.verify_threshold);
    w.certified_psi = sp.psi;
    w.verified = true;
  } else {
    w.certified_psi = game.certified_psi;
    w.verified = game.cert_verified;
  }
  res.has_witness = true;
  res.witness = std::move(w);
  return res;
}

CertifyResult certify_witness(const DiGraph& g, const Rat& phi, const Rat& eps,
                              const WitnessOptions& opt) {
  CertifyResult res;
  int n = g.num_vertices();
  if (n <= 1) {
    res.certified = true;
    return res;
  }
  Int l2 = std::max(Int(1), ceil_log2(Rat(std::max(n, 2))));
  if (phi <= 0 || phi * Rat(l2 * l2) > 1)
    throw input_error("certify_witness: need phi in (0, 1/log^2 n]");
  Int r_est = Int(opt.round_estimate_factor) * l2;
  Rat phi_game = 4 * Rat(r_est) * phi;
  if (phi_game > Rat(1, 2)) phi_game = Rat(1, 2);
  Rat alpha_ex = opt.alpha_ex.value_or(gamma_value(1, Rat(1, 4)));
  Rat beta = Rat(l2 * l2) / alpha_ex;
  Rat eps_prime = eps / beta;
  if (eps_prime <= 0) throw input_error("certify_witness: eps out of range");

  std::vector<int> verts = g.vertices();
  struct RoundRecord {
    std::vector<EmbeddedPath> paths;
    DirectedMatching fakes;
  };
  std::vector<RoundRecord> records;
  MatcherFn matcher = [&](const std::vector<int>& ai,
                          const std::vector<int>& bi)
      -> std::pair<DirectedMatching, DirectedMatching> {
    auto run = [&](const std::vector<int>& from, const std::vector<int>& to) {
      CongestedMatchingResult r =
          vertex_congested_matching(g, from, to, phi_game, eps_prime);
      if (!r.has_matching) {
        MatcherAbort abort;
        abort.left = r.cut->left;
        abort.sep = r.cut->sep;
        abort.right = r.cut->right;
        throw abort;
      }
      RoundRecord rec;
      DirectedMatching m;
      std::vector<Rat> out_w(g.vertex_slots(), Rat(0)), in_w(g.vertex_slots(), Rat(0));
      for (FlowPath& p : r.embedding) {
        EmbeddedPath ep;
        ep.vertices = std::move(p.vertices);
        ep.edge_ids = std::move(p.edge_ids);
        ep.val = p.val;
        ep.index_vertices();
        m.arcs.push_back({ep.vertices.front(), ep.vertices.back(), ep.val});
        out_w[ep.vertices.front()] += ep.val;
        in_w[ep.vertices.back()] += ep.val;
        rec.paths.push_back(std::move(ep));
      }
      rec.fakes = make_fakes(from, to, out_w, in_w);
      for (const auto& arc : rec.fakes.arcs) m.arcs.push_back(arc);
      records.push_back(std::move(rec));
      return m;
    };
    DirectedMatching fwd = run(ai, bi);
    DirectedMatching bwd = run(bi, ai);
    return {fwd, bwd};
  };

  GameResult game;
  try {
    game = play_game(verts, Rat(1), matcher, opt.game);
  } catch (const MatcherAbort& abort) {
    VertexCutView cut;
    cut.left = abort.left;
    cut.sep = abort.sep;
    cut.right = abort.right;
    cut.direction = CutDirection::lr_empty;
    res.cut = std::move(cut);
    return res;
  }
  // Assemble the integral witness, prune the fakes, and audit the size.
  int slots = g.vertex_slots();
  DiGraph wstar(slots);
  for (int v = 0; v < slots; ++v)
    if (!g.vertex_alive(v)) wstar.delete_vertex(v);
  std::vector<EmbeddedPath> path_of_edge;
  std::vector<char> is_fake;
  for (RoundRecord& rec : records) {
    for (EmbeddedPath& p : rec.paths) {
      int id = wstar.add_edge(p.vertices.front(), p.vertices.back(), p.val);
      p.witness_edge = id;
      path_of_edge.push_back(p);
      is_fake.push_back(0);
    }
    for (const auto& arc : rec.fakes.arcs) {
      wstar.add_edge(arc.from, arc.to, arc.w);
      path_of_edge.push_back({});
      is_fake.push_back(1);
    }
  }
  std::vector<int> fake_ids;
  for (int e = 0; e < wstar.edge_slots(); ++e)
    if (is_fake[e]) fake_ids.push_back(e);
  Rat phi_prune = measured_edge_expansion(wstar, opt.verify_threshold);
  std::vector<int> pruned_all;
  if (!fake_ids.empty() && phi_prune > 0) {
    PruneOptions popt;
    popt.level_param = choose_level_param(Int(n), phi_prune);
    popt.check_invariants = false;
    PruneState prune(wstar, phi_prune, popt);
    for (int e : fake_ids) {
      std::vector<int> x = prune.delete_edge(e);
      pruned_all.insert(pruned_all.end(), x.begin(), x.end());
    }
  }
  std::vector<char> dropped(slots, 0);
  for (int v : pruned_all) dropped[v] = 1;
  Witness w;
  w.weight_unit = 1;
  w.w.reset(slots);
  for (int v = 0; v < slots; ++v)
    if ((!g.vertex_alive(v) || dropped[v]) && w.w.vertex_alive(v))
      w.w.delete_vertex(v);
  for (int e = 0; e < wstar.edge_slots(); ++e) {
    if (is_fake[e]) continue;
    const Edge& ed = wstar.edge(e);
    if (dropped[ed.tail] || dropped[ed.head]) continue;
    int nid = w.w.add_edge(ed.tail, ed.head, ed.w);
    EmbeddedPath p = path_of_edge[e];
    p.witness_edge = nid;
    w.embedding.paths.push_back(std::move(p));
  }
  if (Rat(w.w.num_vertices()) < (1 - eps) * Rat(n))
    throw verify_error("certify_witness: pruned witness below (1-eps)n");
  // witness congestion audit: the measured vertex congestion of the
  // kept embedding must stay within 1/phi.
  {
    std::vector<Rat> vload(g.vertex_slots(), Rat(0));
    for (const EmbeddedPath& p : w.embedding.paths)
      for (int v : p.vertices) vload[v] += p.val;
    for (int v : g.vertices())
      if (vload[v] * phi > 1)
        throw verify_error("certify_witness: embedding congestion above 1/phi");
  }
  if (w.w.num_vertices() <= opt.verify_threshold) {
    w.certified_psi = graph_sparsity(w.w, opt.verify_threshold).psi;
    w.verified = true;
  } else {
    w.certified_psi = game.certified_psi;
    w.verified = game.cert_verified;
  }
  res.certified = true;
  res.witness = std::move(w);
  return res;
}

RobustWitness::RobustWitness(const DiGraph& g0, const Rat& phi,
                             WitnessOptions opt)
    : g_(g0), phi_(phi), opt_(std::move(opt)) {
  n0_ = g_.num_vertices();
  Int l2 = std::max(Int(1), ceil_log2(Rat(std::max(n0_, 2))));
  if (phi_ <= 0 || phi_ * Rat(l2 * l2) > 1)
    throw input_error("RobustWitness: need phi in (0, 1/log^2 n]");
  Rat alpha_ex = opt_.alpha_ex.value_or(gamma_value(1, Rat(1, 4)));
  Rat raw = phi_ * alpha_ex / Rat(l2 * l2);
  if (raw <= 0 || raw >= 1)
    throw input_error("RobustWitness: phi' out of range");
  // phi' is rounded down to a power of two so that d (also a power of two,
  // with d/phi' a power of two as the capacity grid requires) keeps Delta = 1 and
  // the whole kappa grid on exact multiples of 1/d.
  phi_prime_ = Rat(1) / Rat(Int(1) << to_long(ceil_log2(1 / raw)));
  Rat d_avg = g_.num_vertices() > 0
                  ? Rat(g_.num_edges()) / Rat(g_.num_vertices())
                  : Rat(1);
  if (d_avg < 1) d_avg = 1;
  Rat d(Int(1) << to_long(ceil_log2(d_avg)));
  unit_ = 1 / d;
  kappa_.assign(g_.edge_slots(), unit_);
  begin_phase();
}

void RobustWitness::begin_phase() {
  Int l2 = std::max(Int(1), ceil_log2(Rat(std::max(n0_, 2))));
  Rat eps_wit = opt_.eps_wit.value_or(Rat(1) / Rat(4 * l2 * l2));
  CertifyResult gate = certify_witness(g_, phi_, eps_wit / 2, opt_);
  if (!gate.certified) {
    terminated_ = true;
    cut_ = gate.cut;
    return;
  }
  Rat d = 1 / unit_;
  long guard = 0;
  long cap = 1000 * (1 + to_long(ceil_rat(1 / phi_))) *
             (1 + to_long(ceil_log2(Rat(std::max(n0_, 2)))));
  while (true) {
    if (++guard > cap)
      throw verify_error("RobustWitness: doubling cap exceeded");
    EmbedWitnessResult ew = embed_witness(g_, kappa_, phi_prime_, d, opt_);
    if (ew.has_witness) {
      install(std::move(ew.witness));
      return;
    }
    std::vector<char> lmask(g_.vertex_slots(), 0), rmask(g_.vertex_slots(), 0);
    for (int v : ew.left) lmask[v] = 1;
    for (int v : ew.right) rmask[v] = 1;
    bool doubled = false;
    for (int e : g_.edges()) {
      const Edge& ed = g_.edge(e);
      if (lmask[ed.tail] && rmask[ed.head] && kappa_[e] < 1 / phi_prime_) {
        if (kappa_[e] > 1 / (2 * phi_prime_))
          throw verify_error("RobustWitness: kappa grid broken");
        kappa_[e] *= 2;
        doubled = true;
      }
    }
    if (!doubled)
      throw verify_error("RobustWitness: bottleneck cut with nothing to double");
    ++stats_.doublings;
  }
}

void RobustWitness::install(Witness w) {
  witness_ = std::move(w);
  witness_at_install_ = witness_.w;
  // W_u with d * w(e) unit copies per witness edge.
  int slots = g_.vertex_slots();
  DiGraph wu(slots);
  for (int v = 0; v < slots; ++v)
    if (!witness_.w.vertex_alive(v) && wu.vertex_alive(v)) wu.delete_vertex(v);
  unit_edges_of_.assign(witness_.w.edge_slots(), {});
  Rat d = 1 / unit_;
  for (int e : witness_.w.edges()) {
    const Edge& ed = witness_.w.edge(e);
    Rat count = ed.w * d;
    if (!is_integral(count))
      throw verify_error("RobustWitness: witness weight off the 1/d grid");
    long c = to_long(rat_num(count));
    for (long k = 0; k < c; ++k)
      unit_edges_of_[e].push_back(wu.add_edge(ed.tail, ed.head, 1));
  }
  Rat phi_prune = measured_edge_expansion(wu, opt_.verify_threshold);
  if (phi_prune <= 0) phi_prune = Rat(1, 64);
  PruneOptions popt;
  popt.level_param = choose_level_param(Int(std::max(n0_, 2)), phi_prune);
  popt.check_invariants = false;
  prune_.emplace(wu, phi_prune, popt);
  paths_through_.assign(g_.edge_slots(), {});
  for (size_t i = 0; i < witness_.embedding.paths.size(); ++i)
    for (int e : witness_.embedding.paths[i].edge_ids)
      paths_through_[e].push_back(static_cast<int>(i));
  counter_ = 0;
  ++stats_.phases;
  stats_.kappa_total = 0;
  for (const Rat& k : kappa_) stats_.kappa_total += k;
}

WitnessChangeReport RobustWitness::delete_edge(int edge_id) {
  if (terminated_) throw input_error("RobustWitness: already terminated");
  WitnessChangeReport rep;
  g_.delete_edge(edge_id);
  ++updates_;
  std::vector<int> dead_paths = paths_through_[edge_id];
  std::vector<int> pruned;
  for (int pidx : dead_paths) {
    EmbeddedPath& p = witness_.embedding.paths[pidx];
    if (p.witness_edge < 0 || !witness_.w.edge_alive(p.witness_edge)) continue;
    int we = p.witness_edge;
    witness_.w.delete_edge(we);
    rep.removed_witness_edges.push_back(we);
    for (int uid : unit_edges_of_[we]) {
      if (!prune_->current().edge_alive(uid)) continue;
      std::vector<int> x = prune_->delete_edge(uid);
      pruned.insert(pruned.end(), x.begin(), x.end());
    }
    p.witness_edge = -1;
  }
  if (!pruned.empty()) {
    counter_ += witness_at_install_.volume(pruned);
    rep.pruned_vertices = pruned;
  }
  if (counter_ >= Rat(n0_) / 50) {
    rep.phase_reset = true;
    stats_.reset_indices.push_back(updates_);
    begin_phase();
    rep.terminated = terminated_;
    return rep;
  }
  for (int v : pruned)
    if (witness_.w.vertex_alive(v)) {
      // drop the embedding paths of the incident witness edges
      for (int we : witness_.w.out_edges(v)) rep.removed_witness_edges.push_back(we);
      for (int we : witness_.w.in_edges(v)) rep.removed_witness_edges.push_back(we);
      witness_.w.delete_vertex(v);
    }
  for (EmbeddedPath& p : witness_.embedding.paths)
    if (p.witness_edge >= 0 && !witness_.w.edge_alive(p.witness_edge))
      p.witness_edge = -1;
  return rep;
}

}  // namespace dygx
