#include "scc_oracle.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace dygx {

SccOracle::SccOracle(const DiGraph& g, SccOracleOptions opt)
    : g_(g), opt_(std::move(opt)) {
  int n = std::max(g_.num_vertices(), 1);
  phi_star_ = opt_.phi_star.value_or(
      Rat(1) / Rat(ceil_pow_frac(Int(std::max(n, 2)), 1, 3)));
  comp_of_.assign(g_.vertex_slots(), -1);
  build_components(g_.vertices());
  stack_ = std::make_unique<LackiStack>(
      &g_, [this](int v) { return comp_of_[v]; }, next_comp_);
  for (int v : separators_) stack_->push_separator(v);
}

void SccOracle::build_components(const std::vector<int>& vertices) {
  if (vertices.empty()) return;
  DiGraph sub = g_.induced(vertices);
  SccPartition parts = scc_partition(sub);
  std::vector<std::vector<int>> blocks(parts.count);
  for (int v : vertices) blocks[parts.comp[v]].push_back(v);
  if (parts.count > 1) ++stats_.eager_extra_splits;
  for (std::vector<int>& blk : blocks) create_component(std::move(blk));
}

int SccOracle::create_component(std::vector<int> vertices) {
  int id = next_comp_++;
  Component c;
  c.vertices = vertices;
  c.trivial = vertices.size() <= 1;
  for (int v : vertices) comp_of_[v] = id;
  if (!c.trivial) {
    DiGraph sub = g_.induced(vertices);
    Int l2 = std::max(Int(1), ceil_log2(Rat(std::max<int>(
                                  static_cast<int>(vertices.size()), 2))));
    // The certify gate needs phi <= 1/log^2 n, and the measured-congestion audit
    // needs 8 * R_est * phi <= 1 so the per-round congestion budget of the
    // game fits inside 1/phi.
    Rat phi_wit = std::min(phi_star_, Rat(1) / Rat(l2 * l2));
    Rat r_est = Rat(8 * opt_.witness.round_estimate_factor) * Rat(l2);
    phi_wit = std::min(phi_wit, 1 / r_est);
    WitnessOptions wopt = opt_.witness;
    wopt.verify_threshold = opt_.verify_threshold;
    // Keep the kappa grid small: measured witness expansions at this scale
    // sit near 1/(2R), far above the worst-case gamma ladder value.
    if (!wopt.alpha_ex) wopt.alpha_ex = Rat(1, 64);
    c.rw.emplace(sub, phi_wit, wopt);
    if (!c.rw->alive()) {
      // CERTIFY-WITNESS found a balanced sparse cut immediately: split now.
      const VertexCutView& cut = *c.rw->termination_cut();
      ++stats_.witness_terminations;
      for (int v : vertices) comp_of_[v] = -1;
      add_separators(cut.sep);
      std::vector<char> in_sep(g_.vertex_slots(), 0);
      for (int v : cut.sep) in_sep[v] = 1;
      std::vector<int> rest;
      for (int v : vertices)
        if (!in_sep[v]) rest.push_back(v);
      ++stats_.component_splits;
      build_components(rest);
      return -1;
    }
    components_[id] = std::move(c);
    install_phase(components_[id]);
  } else {
    components_[id] = std::move(c);
  }
  return id;
}

void SccOracle::install_phase(Component& c) {
  const Witness& w = c.rw->witness();
  c.wu.reset(g_.vertex_slots());
  for (int v = 0; v < g_.vertex_slots(); ++v)
    if (!w.w.vertex_alive(v) && c.wu.vertex_alive(v)) c.wu.delete_vertex(v);
  c.unit_owner.clear();
  c.units_of.clear();
  c.path_of_witness_edge.clear();
  Rat d = 1 / c.rw->weight_unit();
  for (int e : w.w.edges()) {
    const Edge& ed = w.w.edge(e);
    Rat count = ed.w * d;
    if (!is_integral(count))
      throw verify_error("oracle: witness weight off the unit grid");
    long cnt = to_long(rat_num(count));
    for (long k = 0; k < cnt; ++k) {
      int uid = c.wu.add_edge(ed.tail, ed.head, 1);
      c.unit_owner.push_back(e);
      c.units_of[e].push_back(uid);
    }
  }
  for (size_t i = 0; i < w.embedding.paths.size(); ++i)
    if (w.embedding.paths[i].witness_edge >= 0)
      c.path_of_witness_edge[w.embedding.paths[i].witness_edge] =
          static_cast<int>(i);
  PathOracleOptions poopt;
  poopt.levels = opt_.oracle_levels;
  poopt.verify_threshold = opt_.verify_threshold;
  Rat phi_po = measured_edge_expansion(c.wu, opt_.verify_threshold);
  if (phi_po <= 0) phi_po = Rat(1, 16);
  c.po.emplace(c.wu, phi_po, poopt);
  std::vector<int> wverts;
  for (int v : c.vertices)
    if (w.w.vertex_alive(v) && c.po->usable(v)) wverts.push_back(v);
  c.forest.emplace(g_.induced(c.vertices), wverts, phi_star_);
}

void SccOracle::add_separators(const std::vector<int>& sep) {
  for (int v : sep) {
    comp_of_[v] = -1;
    separators_.push_back(v);
    if (stack_) stack_->push_separator(v);
  }
  stats_.max_separator = std::max(stats_.max_separator, separators_.size());
  long cap = opt_.separator_cap_constant *
             to_long(ceil_rat(phi_star_ * Rat(g_.vertex_slots())));
  if (static_cast<long>(separators_.size()) > std::max<long>(cap, 4))
    throw verify_error("oracle: separator set exceeded its cap");
}

void SccOracle::handle_witness_report(int comp_id,
                                      const WitnessChangeReport& rep) {
  auto it = components_.find(comp_id);
  if (it == components_.end()) return;
  Component& c = it->second;
  if (rep.terminated) {
    ++stats_.witness_terminations;
    const VertexCutView& cut = *c.rw->termination_cut();
    std::vector<int> vertices = c.vertices;
    add_separators(cut.sep);
    std::vector<char> in_sep(g_.vertex_slots(), 0);
    for (int v : cut.sep) in_sep[v] = 1;
    std::vector<int> rest;
    for (int v : vertices)
      if (!in_sep[v]) rest.push_back(v);
    components_.erase(comp_id);
    ++stats_.component_splits;
    build_components(rest);
    return;
  }
  if (rep.phase_reset) {
    ++stats_.phase_resets;
    install_phase(c);
    return;
  }
  if (rep.removed_witness_edges.empty() && rep.pruned_vertices.empty()) return;
  // Forward witness shrink to PATH-INSIDE-EXPANDER and the forest.
  std::vector<int> unit_edges;
  for (int we : rep.removed_witness_edges) {
    auto ue = c.units_of.find(we);
    if (ue == c.units_of.end()) continue;
    for (int uid : ue->second)
      if (c.wu.edge_alive(uid)) {
        unit_edges.push_back(uid);
        c.wu.delete_edge(uid);
      }
  }
  std::vector<int> before_pruned;
  for (int v : c.vertices)
    if (!c.po->usable(v)) before_pruned.push_back(v);
  c.po->delete_batch(unit_edges, rep.pruned_vertices);
  std::vector<WitnessForest::CutEvent> events;
  for (int v : rep.pruned_vertices) {
    auto ev = c.forest->remove_from_witness(v);
    events.insert(events.end(), ev.begin(), ev.end());
  }
  // Vertices the oracle pruned beyond the witness report leave W as well so
  // the forest roots stay answerable.
  for (int v : c.vertices) {
    if (c.po->usable(v)) continue;
    if (std::find(before_pruned.begin(), before_pruned.end(), v) !=
        before_pruned.end())
      continue;
    if (std::find(rep.pruned_vertices.begin(), rep.pruned_vertices.end(), v) !=
        rep.pruned_vertices.end())
      continue;
    auto ev = c.forest->remove_from_witness(v);
    events.insert(events.end(), ev.begin(), ev.end());
  }
  process_forest_events(comp_id, std::move(events));
}

void SccOracle::process_forest_events(
    int comp_id, std::vector<WitnessForest::CutEvent> events) {
  if (events.empty()) return;
  auto it = components_.find(comp_id);
  if (it == components_.end()) return;
  Component& c = it->second;
  ++stats_.forest_cuts;
  std::vector<char> gone(g_.vertex_slots(), 0);
  std::vector<int> split_off;
  for (const auto& ev : events) {
    add_separators(ev.sep);
    for (int v : ev.sep) gone[v] = 1;
    for (int v : ev.left) {
      gone[v] = 1;
      split_off.push_back(v);
    }
  }
  // The component keeps R; L and S leave. Edges incident to the departed
  // vertices are no longer part of this component's graph: feed them to the
  // witness machinery as deletions (the embedding may have used them).
  std::vector<int> incident;
  for (int e : g_.edges()) {
    const Edge& ed = g_.edge(e);
    bool tg = gone[ed.tail], hg = gone[ed.head];
    if ((tg || hg) &&
        (comp_of_[ed.tail] == comp_id || comp_of_[ed.head] == comp_id))
      incident.push_back(e);
  }
  std::vector<int> rest;
  for (int v : c.vertices)
    if (!gone[v]) rest.push_back(v);
  c.vertices = rest;
  for (int e : incident) {
    auto itc = components_.find(comp_id);
    if (itc == components_.end()) break;  // the component split away
    if (!itc->second.rw->graph().edge_alive(e)) continue;
    WitnessChangeReport rep = itc->second.rw->delete_edge(e);
    handle_witness_report(comp_id, rep);
  }
  ++stats_.component_splits;
  build_components(split_off);
}

void SccOracle::delete_edge(int edge_id) {
  if (!g_.edge_alive(edge_id)) throw input_error("oracle: edge not present");
  const Edge ed = g_.edge(edge_id);
  g_.delete_edge(edge_id);
  int cid = comp_of_[ed.tail];
  if (cid >= 0 && cid == comp_of_[ed.head]) {
    auto it = components_.find(cid);
    if (it != components_.end() && !it->second.trivial) {
      Component& c = it->second;
      if (c.rw->graph().edge_alive(edge_id)) {
        WitnessChangeReport rep = c.rw->delete_edge(edge_id);
        handle_witness_report(cid, rep);
      }
      auto it2 = components_.find(cid);
      if (it2 != components_.end() && it2->second.forest) {
        auto events = it2->second.forest->delete_edge(edge_id);
        process_forest_events(cid, std::move(events));
      }
    }
  }
  stack_->refresh();
}

bool SccOracle::same_scc(int u, int v) const {
  if (u == v) return g_.vertex_alive(u);
  return stack_->same_scc(u, v);
}

std::vector<int> SccOracle::base_path(int u, int v) {
  int cid = comp_of_[u];
  if (cid < 0 || cid != comp_of_[v])
    throw verify_error("oracle: base path endpoints in different components");
  PathResult pr = component_path(cid, u, v);
  return pr.vertices;
}

SccOracle::PathResult SccOracle::query_path(int u, int v) {
  ++stats_.queries;
  PathResult res;
  if (!g_.vertex_alive(u) || !g_.vertex_alive(v)) return res;
  if (u == v) {
    res.connected = true;
    res.vertices = {u};
    return res;
  }
  if (!stack_->same_scc(u, v)) return res;
  int cu = comp_of_[u];
  if (cu >= 0 && cu == comp_of_[v]) {
    res = component_path(cu, u, v);
  } else {
    res.vertices = stack_->query_path(
        u, v, [this](int a, int b) { return base_path(a, b); });
    res.connected = true;
  }
  // Validate: simple, edge-valid, correct endpoints.
  if (res.vertices.front() != u || res.vertices.back() != v)
    throw verify_error("oracle: path endpoints wrong");
  std::vector<char> seen(g_.vertex_slots(), 0);
  for (size_t i = 0; i < res.vertices.size(); ++i) {
    int x = res.vertices[i];
    if (seen[x]) throw verify_error("oracle: path not simple");
    seen[x] = 1;
    if (i + 1 < res.vertices.size() &&
        g_.find_edge(x, res.vertices[i + 1]) < 0)
      throw verify_error("oracle: path uses a missing edge");
  }
  return res;
}

SpliceResult splice_simple_path(const std::vector<SplicePiece>& pieces, int u,
                               int v) {
  SpliceResult res;
  res.vertices.push_back(u);
  size_t cur_piece = 0;
  int cur_idx = 0;
  int curv = u;
  long guard = 0;
  while (curv != v) {
    if (++guard > 10000000) throw verify_error("splice: loop stuck");
    int best = -1, best_idx = -1;
    for (size_t i = cur_piece + 1; i < pieces.size(); ++i) {
      ++res.steps;
      auto f = pieces[i].pos->find(curv);
      if (f != pieces[i].pos->end()) {
        best = static_cast<int>(i);
        best_idx = f->second;
      }
    }
    if (best >= 0) {
      cur_piece = static_cast<size_t>(best);
      cur_idx = best_idx;
      continue;
    }
    ++res.steps;
    ++cur_idx;
    if (cur_idx >= static_cast<int>(pieces[cur_piece].verts->size()))
      throw verify_error("splice: ran off the end of a piece");
    curv = (*pieces[cur_piece].verts)[cur_idx];
    res.vertices.push_back(curv);
  }
  return res;
}

SccOracle::PathResult SccOracle::component_path(int comp_id, int u, int v) {
  PathResult res;
  res.connected = true;
  if (u == v) {
    res.vertices = {u};
    return res;
  }
  Component& c = components_.at(comp_id);
  if (c.trivial) throw verify_error("oracle: path query inside a trivial component");
  long steps = 0;
  // Piece 1: u to its in-forest root; final piece: out-forest root to v.
  std::vector<int> first = c.forest->path_to_in_root(u);
  std::vector<int> last = c.forest->path_from_out_root(v);
  steps += static_cast<long>(first.size() + last.size());
  int w1 = first.back(), w2 = last.front();
  // Middle pieces: the witness path converted through the embedding. The
  // tree pieces own their vertex lists and membership maps for the query's
  // lifetime; embedding pieces reuse the maps built at install time.
  std::vector<SplicePiece> pieces;
  std::deque<std::vector<int>> owned_lists;
  std::deque<std::unordered_map<int, int>> owned_maps;
  auto add_local = [&](std::vector<int>&& vs) {
    owned_lists.push_back(std::move(vs));
    owned_maps.emplace_back();
    const std::vector<int>& lv = owned_lists.back();
    auto& m = owned_maps.back();
    for (size_t i = 0; i < lv.size(); ++i) m.emplace(lv[i], static_cast<int>(i));
    pieces.push_back({&lv, &m});
    steps += static_cast<long>(lv.size());
  };
  add_local(std::move(first));
  if (w1 != w2) {
    long po_before = c.po->steps();
    PathOracle::Query wq = c.po->query(w1, w2);
    steps += c.po->steps() - po_before;
    const std::vector<int>& wpath = wq.forward;
    const Witness& w = c.rw->witness();
    for (size_t i = 0; i + 1 < wpath.size(); ++i) {
      int we = w.w.find_edge(wpath[i], wpath[i + 1]);
      if (we < 0) throw verify_error("oracle: witness path edge missing");
      auto pit = c.path_of_witness_edge.find(we);
      if (pit == c.path_of_witness_edge.end())
        throw verify_error("oracle: witness edge without embedding path");
      const EmbeddedPath& ep = w.embedding.paths[pit->second];
      pieces.push_back({&ep.vertices, &ep.position});
    }
  }
  add_local(std::move(last));
  res.pieces = static_cast<long>(pieces.size());
  SpliceResult sp = splice_simple_path(pieces, u, v);
  res.steps = steps + sp.steps;
  res.vertices = std::move(sp.vertices);
  return res;
}

std::vector<SccOracle::ForestView> SccOracle::forests() const {
  std::vector<ForestView> out;
  for (const auto& [id, c] : components_) {
    if (c.trivial || !c.forest) continue;
    ForestView fv;
    fv.forest = &*c.forest;
    fv.members = c.vertices;
    out.push_back(std::move(fv));
  }
  return out;
}

ReachabilityOracle::ReachabilityOracle(const DiGraph& g, int source,
                                       SccOracleOptions opt)
    : source_(source) {
  DiGraph aug = g;
  for (int v : g.vertices())
    if (v != source) aug.add_edge(v, source, 1);
  inner_.emplace(aug, std::move(opt));
}

void ReachabilityOracle::delete_edge(int edge_id) {
  inner_->delete_edge(edge_id);
}

bool ReachabilityOracle::reachable(int v) const {
  return inner_->same_scc(source_, v);
}

SccOracle::PathResult ReachabilityOracle::path_to(int v) {
  return inner_->query_path(source_, v);
}

}  // namespace dygx
