#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dygx/cuts.hpp"
#include "dygx/graph_io.hpp"
#include "dygx/scc.hpp"
#include "test_support.hpp"

using namespace dygx;

TEST_CASE("scc: 3-cycle is one block") {
  DiGraph g = directed_cycle(3);
  SccPartition p = scc_partition(g);
  CHECK(p.count == 1);
}

TEST_CASE("scc: path gives singleton blocks") {
  DiGraph g = directed_path(3);
  SccPartition p = scc_partition(g);
  CHECK(p.count == 3);
}

TEST_CASE("scc: two 2-cycles joined by one edge") {
  DiGraph g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 0, 1);
  g.add_edge(2, 3, 1);
  g.add_edge(3, 2, 1);
  g.add_edge(1, 2, 1);
  SccPartition p = scc_partition(g);
  CHECK(p.count == 2);
  CHECK(p.same(0, 1));
  CHECK(p.same(2, 3));
  CHECK(!p.same(1, 2));
  // cross-check against the transitive-closure oracle
  std::vector<int> oracle = testsup::scc_by_closure(g);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      CHECK(p.same(u, v) == (oracle[u] == oracle[v]));
}

TEST_CASE("scc matches closure oracle on random graphs") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 60; ++it) {
    DiGraph g = testsup::random_graph(rng, 8, 14);
    SccPartition p = scc_partition(g);
    std::vector<int> oracle = testsup::scc_by_closure(g);
    for (int u = 0; u < 8; ++u)
      for (int v = 0; v < 8; ++v)
        CHECK(p.same(u, v) == (oracle[u] == oracle[v]));
  }
}

TEST_CASE("deletions only refine SCC blocks") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 30; ++it) {
    DiGraph g = testsup::random_graph(rng, 7, 16);
    SccPartition before = scc_partition(g);
    std::vector<int> es = g.edges();
    if (es.empty()) continue;
    g.delete_edge(es[rng() % es.size()]);
    SccPartition after = scc_partition(g);
    CHECK(refines(after, before));
  }
}

TEST_CASE("cut_measures on C4") {
  DiGraph g = directed_cycle(4);
  EdgeCutView c = cut_measures(g, {0, 1});
  CHECK(c.delta_out == 1);
  CHECK(c.delta_in == 1);
  CHECK(c.vol_s == 4);
}

TEST_CASE("cut_measures on bidirected K4 singleton") {
  DiGraph g = bidirected_clique(4);
  EdgeCutView c = cut_measures(g, {0});
  CHECK(c.delta_out == 3);
  CHECK(c.delta_in == 3);
  CHECK(c.vol_s == 6);
}

TEST_CASE("cut_measures: isolated side has zero deltas") {
  DiGraph g(3);
  g.add_edge(0, 1, 1);
  EdgeCutView c = cut_measures(g, {2});
  CHECK(c.delta_out == 0);
  CHECK(c.delta_in == 0);
}

TEST_CASE("cut_measures rejects empty and full S") {
  DiGraph g = directed_cycle(3);
  CHECK_THROWS_AS(cut_measures(g, {}), input_error);
  CHECK_THROWS_AS(cut_measures(g, {0, 1, 2}), input_error);
}

TEST_CASE("reverse-graph symmetry of cut measures") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 40; ++it) {
    DiGraph g = testsup::random_graph(rng, 6, 12);
    DiGraph r = g.reversed();
    std::vector<int> s;
    for (int v = 0; v < 6; ++v)
      if (rng() & 1) s.push_back(v);
    if (s.empty() || s.size() == 6) continue;
    EdgeCutView a = cut_measures(g, s);
    EdgeCutView b = cut_measures(r, s);
    CHECK(a.delta_out == b.delta_in);
    CHECK(a.delta_in == b.delta_out);
    CHECK(a.vol_s == b.vol_s);
  }
}

TEST_CASE("check_expander on C4") {
  DiGraph g = directed_cycle(4);
  auto r1 = check_expander(g, Rat(1, 4));
  CHECK(r1.certified);
  auto r2 = check_expander(g, Rat(1, 3));
  CHECK(!r2.certified);
  REQUIRE(r2.witness_cut.has_value());
  CHECK(r2.witness_cut->side.size() == 2);
  CHECK(r2.witness_cut->min_delta() * 4 == r2.witness_cut->vol_s);  // sparsity 1/4
}

TEST_CASE("check_expander on bidirected K4") {
  DiGraph g = bidirected_clique(4);
  CHECK(check_expander(g, Rat(1, 3)).certified);
}

TEST_CASE("isolated vertex is an expander") {
  DiGraph g(1);
  CHECK(check_expander(g, Rat(1000)).certified);
}

TEST_CASE("check_expander agrees with gray-code enumerator") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 80; ++it) {
    int n = 3 + static_cast<int>(rng() % 8);  // up to 10
    DiGraph g = testsup::random_graph(rng, n, 2 * n);
    Rat phi(1 + static_cast<int>(rng() % 3), 4);
    auto mine = check_expander(g, phi);
    auto other = testsup::find_sparse_cut_gray(g, phi);
    CHECK(mine.certified == !other.found);
  }
}

TEST_CASE("check_vertex_expander on K5") {
  DiGraph g = bidirected_clique(5);
  CHECK(check_vertex_expander(g, Rat(1, 2)).certified);
}

TEST_CASE("check_vertex_expander finds the shared cut vertex") {
  // two bidirected K4's sharing vertex 0
  DiGraph g(7);
  std::vector<int> a{0, 1, 2, 3}, b{0, 4, 5, 6};
  for (int i : a)
    for (int j : a)
      if (i != j) g.add_edge(i, j, 1);
  for (int i : b)
    for (int j : b)
      if (i != j) g.add_edge(i, j, 1);
  // |L| = 3 on each side, so (L, {0}, R) is phi-vertex-sparse exactly when
  // 1 < 3*phi: sparse at phi = 1/2, certified at phi = 1/4.
  auto r = check_vertex_expander(g, Rat(1, 2));
  CHECK(!r.certified);
  REQUIRE(r.witness_cut.has_value());
  CHECK(r.witness_cut->sep == std::vector<int>{0});
  CHECK(verify_vertex_cut(g, *r.witness_cut));
  CHECK(check_vertex_expander(g, Rat(1, 4)).certified);
}

TEST_CASE("check_vertex_expander on a single vertex") {
  DiGraph g(1);
  CHECK(check_vertex_expander(g, Rat(1)).certified);
}

TEST_CASE("near expander: full set of an expander") {
  DiGraph g = bidirected_clique(4);
  auto r = check_near_expander(g, g.vertices(), Rat(1, 3));
  CHECK(r.certified);
}

TEST_CASE("near expander: empty A certifies vacuously") {
  DiGraph g = directed_cycle(3);
  CHECK(check_near_expander(g, {}, Rat(1)).certified);
}

TEST_CASE("near expander: severed clique half violates") {
  // Two bidirected triangles. A = first triangle; its only outgoing edges
  // were removed, so any S inside A with small volume fails out-expansion.
  DiGraph g(6);
  std::vector<int> t1{0, 1, 2}, t2{3, 4, 5};
  for (int i : t1)
    for (int j : t1)
      if (i != j) g.add_edge(i, j, 1);
  for (int i : t2)
    for (int j : t2)
      if (i != j) g.add_edge(i, j, 1);
  g.add_edge(3, 0, 1);  // only edge between the triangles, into A
  auto r = check_near_expander(g, t1, Rat(1, 2));
  CHECK(!r.certified);
  CHECK(!r.violating_set.empty());
}

TEST_CASE("graph text format round trip") {
  std::string text = "4 3 2\n0 1 1\n1 2 2\n2 3 1\n";
  LoadedGraph lg = parse_graph_text(text);
  CHECK(lg.graph.num_vertices() == 4);
  CHECK(lg.graph.num_edges() == 3);
  CHECK(lg.denominator == 2);
  CHECK(lg.graph.edge(1).w == 1);
  CHECK(lg.graph.edge(0).w == Rat(1, 2));
  std::string again = format_graph(lg.graph, lg.denominator);
  LoadedGraph lg2 = parse_graph_text(again);
  CHECK(lg2.graph.num_edges() == 3);
  CHECK(format_graph(lg2.graph, lg2.denominator) == again);
}

TEST_CASE("graph parser rejects malformed input") {
  CHECK_THROWS_AS(parse_graph_text("2 1 1\n0 5 1\n"), input_error);
  CHECK_THROWS_AS(parse_graph_text("2 1\n"), input_error);
}

TEST_CASE("graph_sparsity measures the K2 cycle") {
  DiGraph g = bidirected_cycle(2);  // two vertices, parallel 2-cycles
  SparsityResult r = graph_sparsity(g);
  CHECK(r.psi == 2);  // both directions carry weight 2
}
