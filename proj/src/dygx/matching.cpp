#include "matching.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "flow_routines.hpp"

namespace dygx {

int hopcroft_karp(const DiGraph& g, const std::vector<int>& left,
                  const std::vector<int>& right, int max_phases) {
  (void)right;
  int slots = g.vertex_slots();
  std::vector<int> match_l(slots, -1), match_r(slots, -1);
  int size = 0;
  int phases = 0;
  const long INF = 1L << 60;
  std::vector<long> dist(slots, INF);
  while (max_phases < 0 || phases < max_phases) {
    ++phases;
    std::deque<int> q;
    for (int u : left) {
      if (!g.vertex_alive(u)) continue;
      if (match_l[u] < 0) {
        dist[u] = 0;
        q.push_back(u);
      } else {
        dist[u] = INF;
      }
    }
    bool reachable_free = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int e : g.out_edges(u)) {
        int v = g.edge(e).head;
        int w = match_r[v];
        if (w < 0) {
          reachable_free = true;
        } else if (dist[w] == INF) {
          dist[w] = dist[u] + 1;
          q.push_back(w);
        }
      }
    }
    if (!reachable_free) break;
    // DFS augmenting along the layered structure
    std::function<bool(int)> try_kuhn = [&](int u) -> bool {
      for (int e : g.out_edges(u)) {
        int v = g.edge(e).head;
        int w = match_r[v];
        if (w < 0 || (dist[w] == dist[u] + 1 && try_kuhn(w))) {
          match_l[u] = v;
          match_r[v] = u;
          return true;
        }
      }
      dist[u] = INF;
      return false;
    };
    int gained = 0;
    for (int u : left)
      if (g.vertex_alive(u) && match_l[u] < 0 && dist[u] == 0 && try_kuhn(u))
        ++gained;
    if (gained == 0) break;
    size += gained;
  }
  return size;
}

MatchingOrCut matching_or_cut(const DiGraph& g, const std::vector<int>& left,
                              const std::vector<int>& right,
                              const std::vector<Rat>& kappa, const Rat& mu,
                              const Rat& eps) {
  int n = 0;
  for (int v : left)
    if (g.vertex_alive(v)) ++n;
  // the phase loop passes mu(1-3eps), which dips below 1 near the end of the
  // mu*-halving loop, so only positivity is enforced here.
  if (mu <= 0 || Rat(n) < mu)
    throw input_error("matching_or_cut: mu out of (0, n]");
  if (eps <= 0 || eps >= 1) throw input_error("matching_or_cut: eps out of (0,1)");
  FlowProblem pi = FlowProblem::zeros(g);
  pi.cap = kappa;
  pi.cap_inf.assign(g.edge_slots(), 0);
  for (int v : left)
    if (g.vertex_alive(v)) pi.delta[v] = 1;
  for (int v : right)
    if (g.vertex_alive(v)) pi.sink[v] = 1;
  Int h = ceil_rat(2 / eps);
  Rat z = Rat(n) - mu * (1 - eps);
  if (z < 0) z = 0;
  FlowOrCut fc = matching_flow(g, left, right, pi, z, h);
  MatchingOrCut res;
  if (fc.routed()) {
    res.has_matching = true;
    res.val = fc.preflow->flow;
    res.value = pi.total_delta() - fc.preflow->total_excess;
    if (res.value < mu * (1 - eps))
      throw verify_error("matching_or_cut: matching value below mu(1-eps)");
    for (int e : g.edges())
      if (res.val[e] > kappa[e])
        throw verify_error("matching_or_cut: capacity violated");
    return res;
  }
  std::vector<char> in_s(g.vertex_slots(), 0);
  for (int v : fc.cut_side) in_s[v] = 1;
  std::vector<char> is_left(g.vertex_slots(), 0);
  for (int v : left) is_left[v] = 1;
  Rat cut_kappa = 0;
  for (int v : fc.cut_side)
    (is_left[v] ? res.s_l : res.s_r).push_back(v);
  for (int e : g.edges()) {
    const Edge& ed = g.edge(e);
    if (in_s[ed.tail] && !in_s[ed.head]) cut_kappa += kappa[e];
  }
  // cut-arm inequality, re-verified from the cut sets.
  if (!(cut_kappa + Rat(res.s_r.size()) <= mu + Rat(res.s_l.size()) - Rat(n)))
    throw verify_error("matching_or_cut: cut inequality violated");
  return res;
}

RobustMatching::RobustMatching(const DiGraph& g0, std::vector<int> left,
                               std::vector<int> right, Rat mu, Rat eps,
                               Observer observer)
    : g_(g0), left_(std::move(left)), right_(std::move(right)),
      mu_(std::move(mu)), eps_(std::move(eps)), observer_(std::move(observer)) {
  if (left_.size() > right_.size())
    throw input_error("RobustMatching: need |L| <= |R|");
  Int n2 = 1;
  while (n2 < Int(left_.size())) n2 *= 2;
  n2_ = n2;
  kappa_.assign(g_.edge_slots(), Rat(1) / Rat(n2_));
  val_.assign(g_.edge_slots(), Rat(0));
  stats_.kappa_initial_total = Rat(g_.num_edges()) / Rat(n2_);
  begin_phase();
}

bool RobustMatching::matching_too_small() const {
  Int phases = ceil_rat(1 / eps_);
  int approx = hopcroft_karp(g_, left_, right_, static_cast<int>(to_long(phases)));
  return Rat(approx) < mu_ * (1 - 2 * eps_);
}

void RobustMatching::begin_phase() {
  std::fill(val_.begin(), val_.end(), Rat(0));
  if (matching_too_small()) {
    terminated_ = true;
    return;
  }
  while (true) {
    MatchingOrCut r =
        matching_or_cut(g_, left_, right_, kappa_, mu_ * (1 - 3 * eps_), eps_);
    if (r.has_matching) {
      val_ = r.val;
      counter_ = 0;
      ++stats_.phases;
      if (observer_) observer_("phase-installed");
      return;
    }
    // Double capacities on E* = edges crossing (S_L, R \ S_R) with kappa < 1.
    if (observer_) observer_("pre-doubling");
    std::vector<char> in_sl(g_.vertex_slots(), 0), in_sr(g_.vertex_slots(), 0);
    for (int v : r.s_l) in_sl[v] = 1;
    for (int v : r.s_r) in_sr[v] = 1;
    bool doubled = false;
    for (int e : g_.edges()) {
      const Edge& ed = g_.edge(e);
      if (in_sl[ed.tail] && !in_sr[ed.head] && kappa_[e] < 1) {
        if (kappa_[e] > Rat(1, 2))
          throw verify_error("RobustMatching: kappa below 1 exceeds 1/2");
        kappa_[e] *= 2;
        doubled = true;
      }
    }
    if (!doubled)
      throw verify_error("RobustMatching: cut arm with nothing to double");
    ++stats_.doublings;
    if (observer_) observer_("post-doubling");
  }
}

Rat RobustMatching::matching_value() const {
  Rat v = 0;
  for (int e : g_.edges()) v += val_[e];
  return v;
}

void RobustMatching::delete_edge(int edge_id) {
  if (terminated_) throw input_error("RobustMatching: already terminated");
  Rat lost = val_[edge_id];
  val_[edge_id] = 0;
  g_.delete_edge(edge_id);
  counter_ += lost;
  if (counter_ >= eps_ * mu_) begin_phase();
}

RobustMatchingStats stats_snapshot(const RobustMatching& rm) { return rm.stats(); }

DecrementalMatching::DecrementalMatching(const DiGraph& g0,
                                         std::vector<int> left,
                                         std::vector<int> right, Rat eps)
    : g_(g0), left_(std::move(left)), right_(std::move(right)),
      eps_(std::move(eps)) {
  mu_star_ = Rat(left_.size());
  if (mu_star_ < 1) mu_star_ = 1;
  ensure_alive();
}

void DecrementalMatching::ensure_alive() {
  while (mu_star_ >= 1) {
    if (!inner_) {
      ++restarts_;
      inner_.emplace(g_, left_, right_, mu_star_, eps_);
    }
    if (inner_->alive()) return;
    mu_star_ *= (1 - eps_);
    inner_.reset();
  }
  inner_.reset();
}

void DecrementalMatching::delete_edge(int edge_id) {
  g_.delete_edge(edge_id);
  if (inner_ && inner_->alive()) inner_->delete_edge(edge_id);
  ensure_alive();
}

Rat DecrementalMatching::matching_value() const {
  if (!inner_ || !inner_->alive()) return 0;
  return inner_->matching_value();
}

const std::vector<Rat>& DecrementalMatching::matching() const {
  if (!inner_ || !inner_->alive()) return empty_;
  return inner_->matching();
}

std::optional<Int> potential_oracle(const DiGraph& g,
                                    const std::vector<int>& left,
                                    const std::vector<int>& right,
                                    const std::vector<Rat>& kappa,
                                    const Int& n_pow2, const Rat& mu,
                                    const Rat& eps) {
  if (left.size() > 20 || right.size() > 20)
    throw input_error("potential_oracle: instance too large for brute force");
  std::vector<int> rid(g.vertex_slots(), -1);
  for (size_t i = 0; i < right.size(); ++i) rid[right[i]] = static_cast<int>(i);
  int nr = static_cast<int>(right.size());
  if (nr > 20) throw input_error("potential_oracle: too many right vertices");
  // cost per edge: log2(n * kappa(e)); kappa must be a power of two over n.
  std::vector<long> cost(g.edge_slots(), 0);
  for (int e : g.edges()) {
    Rat scaled = kappa[e] * Rat(n_pow2);
    Int num = rat_num(scaled);
    if (rat_den(scaled) != 1 || num <= 0 || (num & (num - 1)) != 0)
      throw input_error("potential_oracle: kappa not a power of two over n");
    long c = 0;
    while (num > 1) {
      num >>= 1;
      ++c;
    }
    cost[e] = c;
  }
  const long INF = 1L << 50;
  size_t masks = 1ull << nr;
  // best[mask][k]: min cost matching some prefix of L into exactly mask with
  // k matched edges; collapse k into the vector index.
  std::vector<std::vector<long>> best(masks);
  for (auto& row : best) row.assign(left.size() + 1, INF);
  best[0][0] = 0;
  for (int u : left) {
    if (!g.vertex_alive(u)) continue;
    std::vector<std::pair<int, long>> choices;  // (right index, cost)
    for (int e : g.out_edges(u)) {
      int r = rid[g.edge(e).head];
      if (r >= 0) choices.push_back({r, cost[e]});
    }
    // iterate masks descending so each u is used once
    for (size_t mask = masks; mask-- > 0;) {
      for (size_t k = 0; k < best[mask].size(); ++k) {
        long base = best[mask][k];
        if (base >= INF) continue;
        for (auto [r, c] : choices) {
          if (mask >> r & 1) continue;
          size_t nm = mask | (1ull << r);
          if (base + c < best[nm][k + 1]) best[nm][k + 1] = base + c;
        }
      }
    }
  }
  Int need = ceil_rat((1 - 2 * eps) * mu);
  if (need < 0) need = 0;
  long out = INF;
  for (size_t mask = 0; mask < masks; ++mask)
    for (size_t k = 0; k < best[mask].size(); ++k)
      if (Int(k) >= need) out = std::min(out, best[mask][k]);
  if (out >= INF) return std::nullopt;
  return Int(out);
}

}  // namespace dygx
