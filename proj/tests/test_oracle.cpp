#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "dygx/condensation.hpp"
#include "dygx/estree.hpp"
#include "dygx/forest.hpp"
#include "dygx/graph_io.hpp"
#include "dygx/path_oracle.hpp"
#include "dygx/scc.hpp"
#include "dygx/scc_oracle.hpp"
#include "test_support.hpp"

using namespace dygx;

namespace {

std::vector<long> bfs_dist(const DiGraph& g, int src, bool reverse) {
  std::vector<long> d(g.vertex_slots(), -1);
  std::deque<int> q{src};
  d[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    auto edges = reverse ? g.in_edges(u) : g.out_edges(u);
    for (int e : edges) {
      int w = reverse ? g.edge(e).tail : g.edge(e).head;
      if (d[w] < 0) {
        d[w] = d[u] + 1;
        q.push_back(w);
      }
    }
  }
  return d;
}

bool path_ok(const DiGraph& g, const std::vector<int>& p, int u, int v) {
  if (p.empty() || p.front() != u || p.back() != v) return false;
  std::set<int> seen;
  for (size_t i = 0; i < p.size(); ++i) {
    if (!seen.insert(p[i]).second) return false;
    if (i + 1 < p.size() && g.find_edge(p[i], p[i + 1]) < 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ESTree matches BFS under random deletions") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    DiGraph g = testsup::random_graph(rng, 9, 24, true);
    ESTree t(g, 0, 5, false);
    DiGraph shadow = g;
    std::vector<int> es = g.edges();
    std::shuffle(es.begin(), es.end(), rng);
    for (int e : es) {
      t.delete_edge(e);
      shadow.delete_edge(e);
      std::vector<long> d = bfs_dist(shadow, 0, false);
      for (int v = 0; v < 9; ++v) {
        long want = (d[v] >= 0 && d[v] <= 5) ? d[v] : -1;
        CHECK(t.level(v) == want);
      }
    }
  }
}

TEST_CASE("ESTree reverse orientation tracks distances to the root") {
  std::mt19937_64 rng(13);
  DiGraph g = testsup::random_graph(rng, 8, 20, true);
  ESTree t(g, 3, 4, true);
  std::vector<long> d = bfs_dist(g, 3, true);
  for (int v = 0; v < 8; ++v) {
    long want = (d[v] >= 0 && d[v] <= 4) ? d[v] : -1;
    CHECK(t.level(v) == want);
  }
}

TEST_CASE("balanced_separator on a directed path") {
  DiGraph g = directed_path(10);
  SeparatorResult r = balanced_separator(g, 0, 3);
  CHECK(!r.inside.empty());
  CHECK(r.inside.front() == 0);
  CHECK(Rat(r.layer.size()) <= r.sparsity_bound);
}

TEST_CASE("balanced_separator with no out-edges") {
  DiGraph g(4);
  g.add_edge(1, 0, 1);
  SeparatorResult r = balanced_separator(g, 0, 2);
  CHECK(r.inside == std::vector<int>{0});
  CHECK(r.layer.empty());
}

TEST_CASE("balanced_separator rejects oversized balls") {
  DiGraph g = bidirected_clique(6);
  CHECK_THROWS_AS(balanced_separator(g, 0, 3), input_error);
}

TEST_CASE("witness forest covers V with bounded depths") {
  DiGraph g = bidirected_clique(8);
  WitnessForest f(g, g.vertices(), Rat(1, 2));
  for (int v : g.vertices()) {
    CHECK(f.contains(v));
    CHECK(f.out_depth(v) <= f.depth_cap());
    CHECK(f.in_depth(v) <= f.depth_cap());
    CHECK(f.out_root(v) >= 0);
  }
}

TEST_CASE("witness forest separates far vertices on a path") {
  // path v0 -> ... -> v5 with W = {v0}: in-forest needs a route back, so the
  // promise |W| >= |V|/2 fails for the plain path; use a cycle instead and
  // delete an edge to force fallout.
  DiGraph g = bidirected_cycle(8);
  std::vector<int> w{0, 1, 2, 3};
  WitnessForest f(g, w, Rat(1, 2));  // depth cap 3
  // vertex 6 sits 3 hops from the witness; removing a middle edge pushes it out
  int cut_edge = g.find_edge(4, 5);
  auto events = f.delete_edge(cut_edge);
  auto events2 = f.delete_edge(g.find_edge(5, 4));
  (void)events;
  (void)events2;
  // whatever was cut off, every remaining vertex is still covered both ways
  for (int v : f.current_vertices()) {
    CHECK(f.out_depth(v) <= f.depth_cap());
    CHECK(f.in_depth(v) <= f.depth_cap());
  }
}

TEST_CASE("terminal_matching on bidirected K8") {
  DiGraph g = bidirected_clique(8);
  auto r = terminal_matching(g, {0, 1, 2}, {3, 4, 5}, Rat(1, 4));
  CHECK(r.matching.size() == 3);
  std::vector<Rat> eload(g.edge_slots(), Rat(0));
  for (const EmbeddedPath& p : r.embedding) {
    CHECK(Int(p.edge_ids.size()) <= r.length_bound);
    for (int e : p.edge_ids) eload[e] += 1;
  }
  for (int e : g.edges()) CHECK(eload[e] <= r.congestion_bound);
}

TEST_CASE("terminal_matching adjacent singletons") {
  DiGraph g = bidirected_cycle(4);
  auto r = terminal_matching(g, {0}, {1}, Rat(1, 2));
  REQUIRE(r.matching.size() == 1);
  CHECK(r.embedding[0].edge_ids.size() == 1);
}

TEST_CASE("terminal_matching diagnoses a broken promise") {
  DiGraph g(4);  // no edges at all
  CHECK_THROWS_AS(terminal_matching(g, {0}, {1}, Rat(1, 2)), contract_error);
}

TEST_CASE("terminal_witness builds an expander on the terminals") {
  DiGraph g = bidirected_clique(10);
  std::vector<int> t{0, 2, 4, 6, 8, 9};
  Witness w = terminal_witness(g, t, Rat(1, 4));
  CHECK(w.w.num_vertices() == 6);
  SparsityResult sp = graph_sparsity(w.w);
  CHECK(sp.psi > 0);
  // embedding paths live in the host and connect the witness edge endpoints
  for (const EmbeddedPath& p : w.embedding.paths) {
    const Edge& e = w.w.edge(p.witness_edge);
    CHECK(p.vertices.front() == e.tail);
    CHECK(p.vertices.back() == e.head);
  }
}

TEST_CASE("path oracle q=1 on bidirected K8") {
  DiGraph g = bidirected_clique(8);
  PathOracle po(g, Rat(1, 4));
  auto q = po.query(0, 5);
  CHECK(path_ok(po.current(), q.forward, 0, 5));
  CHECK(path_ok(po.current(), q.backward, 5, 0));
  // batch deletions respecting the expander promise
  std::vector<int> batch{g.find_edge(0, 1), g.find_edge(1, 0)};
  po.delete_batch(batch, {});
  auto q2 = po.query(0, 1);
  CHECK(path_ok(po.current(), q2.forward, 0, 1));
  CHECK(q2.forward.size() >= 2);
}

TEST_CASE("path oracle q=1 handles vertex deletions") {
  DiGraph g = bidirected_clique(8);
  PathOracle po(g, Rat(1, 4));
  po.delete_batch({}, {7});
  CHECK(!po.usable(7));
  auto q = po.query(0, 6);
  for (int v : q.forward) CHECK(v != 7);
}

TEST_CASE("path oracle q=2 on a 32-vertex expander") {
  DiGraph g = bidirected_clique(32);
  PathOracleOptions opt;
  opt.levels = 2;
  PathOracle po(g, Rat(1, 4), opt);
  auto q = po.query(3, 19);
  CHECK(path_ok(po.current(), q.forward, 3, 19));
  CHECK(path_ok(po.current(), q.backward, 19, 3));
  po.delete_batch({g.find_edge(3, 19)}, {});
  auto q2 = po.query(3, 19);
  CHECK(path_ok(po.current(), q2.forward, 3, 19));
}

TEST_CASE("peel_extend merges exactly the cycle through x") {
  // 0 -> 1 -> 2 -> 0 through x = 0; supernodes {1}, {2}, {3} with 3 dangling
  DiGraph g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 0, 1);
  g.add_edge(2, 3, 1);
  std::vector<int> comp{-1, 0, 1, 2};
  PeelResult r = peel_extend(g, comp, 3, 0);
  CHECK(r.merged_supernodes == std::vector<int>{0, 1});
}

TEST_CASE("lacki stack equals Tarjan on random traces") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    DiGraph g = testsup::random_graph(rng, 12, 34, true);
    std::vector<int> seps;
    for (int v = 0; v < 12 && seps.size() < 3; ++v)
      if (rng() % 4 == 0) seps.push_back(v);
    std::vector<char> is_sep(g.vertex_slots(), 0);
    for (int s : seps) is_sep[s] = 1;
    // base = Tarjan on G minus separators, refreshed per update
    SccPartition base;
    auto recompute_base = [&]() {
      std::vector<int> rest;
      for (int v : g.vertices())
        if (!is_sep[v]) rest.push_back(v);
      base = scc_partition(g.induced(rest));
    };
    recompute_base();
    LackiStack stack(&g, [&](int v) { return base.comp[v]; }, base.count);
    for (int s : seps) stack.push_separator(s);
    std::vector<int> es = g.edges();
    std::shuffle(es.begin(), es.end(), rng);
    for (int e : es) {
      g.delete_edge(e);
      recompute_base();
      stack.refresh();
      SccPartition truth = scc_partition(g);
      for (int u = 0; u < 12; ++u)
        for (int v = 0; v < 12; ++v) {
          if (u == v) continue;
          CHECK(stack.same_scc(u, v) == truth.same(u, v));
        }
    }
  }
}

TEST_CASE("lacki stack path query crosses a separator level") {
  DiGraph g = directed_cycle(5);
  SccPartition base;
  std::vector<char> is_sep(g.vertex_slots(), 0);
  is_sep[0] = 1;
  std::vector<int> rest{1, 2, 3, 4};
  base = scc_partition(g.induced(rest));
  LackiStack stack(&g, [&](int v) { return base.comp[v]; }, base.count);
  stack.push_separator(0);
  REQUIRE(stack.same_scc(1, 3));
  auto bp = [&](int a, int b) {
    // base supernodes are singletons on a cycle-minus-vertex (a DAG)
    REQUIRE(a == b);
    return std::vector<int>{a};
  };
  std::vector<int> p = stack.query_path(1, 3, bp);
  CHECK(path_ok(g, p, 1, 3));
  std::vector<int> p2 = stack.query_path(3, 1, bp);
  CHECK(path_ok(g, p2, 3, 1));  // must wrap around through 0
}

TEST_CASE("scc oracle tracks Tarjan on a small random trace") {
  std::mt19937_64 rng(5);
  DiGraph g = testsup::random_graph(rng, 16, 60, true);
  SccOracle oracle(g);
  DiGraph shadow = g;
  std::vector<int> es = g.edges();
  std::shuffle(es.begin(), es.end(), rng);
  for (int e : es) {
    oracle.delete_edge(e);
    shadow.delete_edge(e);
    SccPartition truth = scc_partition(shadow);
    for (int u = 0; u < 16; ++u)
      for (int v = u + 1; v < 16; ++v)
        CHECK(oracle.same_scc(u, v) == truth.same(u, v));
  }
}

TEST_CASE("scc oracle answers path queries on bidirected K10") {
  DiGraph g = bidirected_clique(10);
  SccOracle oracle(g);
  std::mt19937_64 rng(3);
  std::vector<int> es = g.edges();
  std::shuffle(es.begin(), es.end(), rng);
  int deleted = 0;
  for (int e : es) {
    oracle.delete_edge(e);
    ++deleted;
    DiGraph shadow = oracle.graph();
    SccPartition truth = scc_partition(shadow);
    for (int q = 0; q < 4; ++q) {
      int u = static_cast<int>(rng() % 10), v = static_cast<int>(rng() % 10);
      if (u == v) continue;
      if (!truth.same(u, v)) {
        CHECK(!oracle.same_scc(u, v));
        continue;
      }
      auto pr = oracle.query_path(u, v);
      REQUIRE(pr.connected);
      CHECK(path_ok(shadow, pr.vertices, u, v));
    }
    if (deleted > 60) break;
  }
}

TEST_CASE("scc oracle on a graph that splits immediately") {
  // two directed triangles joined one-way: two components from the start
  DiGraph g(6);
  for (int base : {0, 3})
    for (int i = 0; i < 3; ++i)
      g.add_edge(base + i, base + (i + 1) % 3, 1);
  g.add_edge(0, 3, 1);
  SccOracle oracle(g);
  CHECK(oracle.same_scc(0, 1));
  CHECK(oracle.same_scc(3, 5));
  CHECK(!oracle.same_scc(0, 3));
  auto pr = oracle.query_path(0, 3);
  CHECK(!pr.connected);
  auto pr2 = oracle.query_path(0, 2);
  CHECK(pr2.connected);
  CHECK(path_ok(oracle.graph(), pr2.vertices, 0, 2));
}

TEST_CASE("reachability wrapper over the oracle") {
  DiGraph g = directed_path(5);
  ReachabilityOracle oracle(g, 0);
  for (int v = 1; v < 5; ++v) CHECK(oracle.reachable(v));
  auto pr = oracle.path_to(4);
  CHECK(pr.connected);
  CHECK(pr.vertices.front() == 0);
  CHECK(pr.vertices.back() == 4);
  oracle.delete_edge(g.find_edge(2, 3));
  CHECK(oracle.reachable(2));
  CHECK(!oracle.reachable(3));
}
