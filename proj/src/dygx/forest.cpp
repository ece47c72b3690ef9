#include "forest.hpp"

#include <algorithm>

namespace dygx {

WitnessForest::WitnessForest(const DiGraph& g, const std::vector<int>& witness,
                             const Rat& phi) {
  cap_ = to_long(ceil_rat(1 / phi)) + 1;
  DiGraph gs = g;
  helper_ = gs.add_vertex();
  present_.assign(gs.vertex_slots(), 0);
  in_witness_.assign(gs.vertex_slots(), 0);
  for (int v : g.vertices()) present_[v] = 1;
  for (int w : witness) {
    if (!present_[w]) throw input_error("WitnessForest: witness vertex missing");
    if (!in_witness_[w]) ++witness_count_;
    in_witness_[w] = 1;
    gs.add_edge(helper_, w, 1);
    gs.add_edge(w, helper_, 1);
  }
  if (2 * witness_count_ < g.num_vertices())
    throw input_error("WitnessForest: need |W| >= |V|/2");
  out_tree_.emplace(gs, helper_, cap_ + 1, false);
  in_tree_.emplace(gs, helper_, cap_ + 1, true);
  std::vector<int> fo, fi;
  for (int v : g.vertices()) {
    if (!out_tree_->in_tree(v)) fo.push_back(v);
    if (!in_tree_->in_tree(v)) fi.push_back(v);
  }
  process_fallen(std::move(fo), std::move(fi));
}

bool WitnessForest::contains(int v) const {
  return v >= 0 && v < static_cast<int>(present_.size()) && present_[v];
}

std::vector<WitnessForest::CutEvent> WitnessForest::process_fallen(
    std::vector<int> fallen_out, std::vector<int> fallen_in) {
  std::vector<CutEvent> events;
  while (true) {
    int bad = -1;
    bool from_out = true;
    for (int v : fallen_out)
      if (present_[v] && !out_tree_->in_tree(v)) {
        bad = v;
        break;
      }
    if (bad < 0)
      for (int v : fallen_in)
        if (present_[v] && !in_tree_->in_tree(v)) {
          bad = v;
          from_out = false;
          break;
        }
    if (bad < 0) return events;
    if (in_witness_[bad])
      throw verify_error("WitnessForest: a witness vertex fell out of range");
    // Out-tree fallout means every vertex reaching `bad` within cap is far
    // from the helper, so grow the reverse ball; in-tree fallout is the
    // forward ball. The ball avoids W and the helper by the depth arithmetic.
    const DiGraph& host = out_tree_->graph();
    DiGraph dir = from_out ? host.reversed() : host.copy();
    SeparatorResult sep = balanced_separator(dir, bad, cap_);
    CutEvent ev;
    ev.from_out_tree = from_out;
    std::vector<int> all = sep.inside;
    all.insert(all.end(), sep.layer.begin(), sep.layer.end());
    for (int v : all)
      if (v == helper_ || in_witness_[v])
        throw verify_error("WitnessForest: separator touched the witness");
    ev.left = sep.inside;
    ev.sep = sep.layer;
    for (int v : all) {
      present_[v] = 0;
      std::vector<int> fo = out_tree_->delete_vertex(v);
      std::vector<int> fi = in_tree_->delete_vertex(v);
      fallen_out.insert(fallen_out.end(), fo.begin(), fo.end());
      fallen_in.insert(fallen_in.end(), fi.begin(), fi.end());
    }
    events.push_back(std::move(ev));
  }
}

std::vector<WitnessForest::CutEvent> WitnessForest::delete_edge(int edge_id) {
  std::vector<int> fo = out_tree_->delete_edge(edge_id);
  std::vector<int> fi = in_tree_->delete_edge(edge_id);
  return process_fallen(std::move(fo), std::move(fi));
}

std::vector<WitnessForest::CutEvent> WitnessForest::remove_from_witness(int v) {
  if (v < 0 || v >= static_cast<int>(in_witness_.size()) || !in_witness_[v])
    return {};
  in_witness_[v] = 0;
  --witness_count_;
  std::vector<int> ids;
  const DiGraph& host = out_tree_->graph();
  for (int e : host.out_edges(helper_))
    if (host.edge(e).head == v) ids.push_back(e);
  for (int e : host.in_edges(helper_))
    if (host.edge(e).tail == v) ids.push_back(e);
  std::vector<int> fo, fi;
  for (int e : ids) {
    std::vector<int> a = out_tree_->delete_edge(e);
    fo.insert(fo.end(), a.begin(), a.end());
    std::vector<int> b = in_tree_->delete_edge(e);
    fi.insert(fi.end(), b.begin(), b.end());
  }
  return process_fallen(std::move(fo), std::move(fi));
}

int WitnessForest::out_root(int v) const {
  std::vector<int> p = path_from_out_root(v);
  if (p.empty()) throw verify_error("WitnessForest: vertex missing from out tree");
  return p.front();
}

int WitnessForest::in_root(int v) const {
  std::vector<int> p = path_to_in_root(v);
  if (p.empty()) throw verify_error("WitnessForest: vertex missing from in tree");
  return p.back();
}

std::vector<int> WitnessForest::path_to_in_root(int v) const {
  if (!contains(v)) return {};
  std::vector<int> p = in_tree_->path_to_root(v);  // v .. helper
  if (p.empty()) return {};
  p.pop_back();
  return p;  // v .. root(in W), a real directed path
}

std::vector<int> WitnessForest::path_from_out_root(int v) const {
  if (!contains(v)) return {};
  std::vector<int> p = out_tree_->path_to_root(v);  // v .. helper
  if (p.empty()) return {};
  p.pop_back();
  std::reverse(p.begin(), p.end());  // root .. v
  return p;
}

long WitnessForest::out_depth(int v) const { return out_tree_->level(v) - 1; }
long WitnessForest::in_depth(int v) const { return in_tree_->level(v) - 1; }

std::vector<int> WitnessForest::current_vertices() const {
  std::vector<int> vs;
  for (size_t v = 0; v < present_.size(); ++v)
    if (present_[v] && static_cast<int>(v) != helper_)
      vs.push_back(static_cast<int>(v));
  return vs;
}

}  // namespace dygx
