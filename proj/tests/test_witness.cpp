#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dygx/graph_io.hpp"
#include "dygx/scc.hpp"
#include "dygx/witness.hpp"

using namespace dygx;

TEST_CASE("embed_matching routes direct paths in bidirected K8") {
  DiGraph g = bidirected_clique(8);
  Rat d(4);
  Rat phi(1, 8);
  std::vector<Rat> kappa(g.edge_slots(), 1 / phi);
  EmbedMatchingResult r =
      embed_matching(g, kappa, {0, 1}, {2, 3}, phi, Rat(1, 16), d);
  REQUIRE(r.has_paths);
  Rat total = 0;
  for (const EmbeddedPath& p : r.paths) {
    total += p.val;
    CHECK(is_unit_multiple(p.val, 1 / d));
  }
  CHECK(total >= (1 - Rat(10, 16)) * 2);
}

TEST_CASE("embed_matching returns the bottleneck partition on a thin graph") {
  // A and B live in two cliques joined by a single low-capacity edge.
  DiGraph g(8);
  for (int base : {0, 4})
    for (int i = base; i < base + 4; ++i)
      for (int j = base; j < base + 4; ++j)
        if (i != j) g.add_edge(i, j, 1);
  int bridge = g.add_edge(0, 4, 1);
  Rat d(64);
  Rat phi(1, 8);
  std::vector<Rat> kappa(g.edge_slots(), Rat(2));
  kappa[bridge] = 1 / d;  // starving capacity on the only A->B route
  EmbedMatchingResult r =
      embed_matching(g, kappa, {1, 2}, {5, 6}, phi, Rat(1, 16), d);
  REQUIRE(!r.has_paths);
  CHECK(r.cut_lhs <= r.cut_rhs);
  CHECK(!r.left.empty());
}

TEST_CASE("embed_matching validates the kappa grid") {
  DiGraph g = bidirected_clique(8);
  std::vector<Rat> kappa(g.edge_slots(), Rat(1, 3));  // not a multiple of 1/4
  CHECK_THROWS_AS(
      embed_matching(g, kappa, {0, 1}, {2, 3}, Rat(1, 8), Rat(1, 16), Rat(4)),
      input_error);
}

TEST_CASE("embed_witness builds a large witness on bidirected K16") {
  DiGraph g = bidirected_clique(16);
  Rat phi(1, 8);
  Rat d(16);
  std::vector<Rat> kappa(g.edge_slots(), 1 / d);
  // fresh capacities are too small; double along returned cuts as the
  // robust-witness loop would
  long doublings = 0;
  EmbedWitnessResult r;
  while (true) {
    r = embed_witness(g, kappa, phi, d);
    if (r.has_witness) break;
    REQUIRE(++doublings < 200);
    std::vector<char> lm(g.vertex_slots(), 0), rm(g.vertex_slots(), 0);
    for (int v : r.left) lm[v] = 1;
    for (int v : r.right) rm[v] = 1;
    bool doubled = false;
    for (int e : g.edges()) {
      const Edge& ed = g.edge(e);
      if (lm[ed.tail] && rm[ed.head] && kappa[e] < 1 / phi) {
        kappa[e] *= 2;
        doubled = true;
      }
    }
    REQUIRE(doubled);
  }
  const Witness& w = r.witness;
  CHECK(w.w.num_vertices() >= 14);  // |V(W)| = n - o(n)
  CHECK(w.certified_psi > 0);
  // every weight is a positive multiple of 1/d; total weight is modest
  for (int e : w.w.edges()) {
    CHECK(w.w.edge(e).w > 0);
    CHECK(is_unit_multiple(w.w.edge(e).w, w.weight_unit));
  }
  // every witness edge has exactly one embedding path of matching value
  for (const EmbeddedPath& p : w.embedding.paths) {
    REQUIRE(p.witness_edge >= 0);
    const Edge& we = w.w.edge(p.witness_edge);
    CHECK(we.tail == p.vertices.front());
    CHECK(we.head == p.vertices.back());
    CHECK(we.w == p.val);
  }
}

TEST_CASE("certify_witness certifies a clique and cuts a barbell") {
  WitnessOptions opt;
  {
    DiGraph g = bidirected_clique(10);
    CertifyResult r = certify_witness(g, Rat(1, 100), Rat(1, 4), opt);
    CHECK(r.certified);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->w.num_vertices() >= 8);
  }
  {
    // two K8s joined through a single middle vertex
    DiGraph g(17);
    for (int base : {0, 8})
      for (int i = base; i < base + 8; ++i)
        for (int j = base; j < base + 8; ++j)
          if (i != j) g.add_edge(i, j, 1);
    int s = 16;
    for (int i = 0; i < 16; ++i) {
      g.add_edge(i, s, 1);
      g.add_edge(s, i, 1);
    }
    CertifyResult r = certify_witness(g, Rat(1, 100), Rat(1, 4), opt);
    CHECK(!r.certified);
    REQUIRE(r.cut.has_value());
    CHECK(verify_vertex_cut(g, *r.cut));
  }
}

TEST_CASE("certify_witness trivial on a single vertex") {
  DiGraph g(1);
  CHECK(certify_witness(g, Rat(1, 10), Rat(1, 2)).certified);
}

TEST_CASE("robust witness survives deletions on bidirected K12") {
  DiGraph g = bidirected_clique(12);
  RobustWitness rw(g, Rat(1, 16));
  REQUIRE(rw.alive());
  CHECK(rw.witness().w.num_vertices() >= 9);  // large witness
  std::mt19937_64 rng(5);
  std::vector<int> es = g.edges();
  std::shuffle(es.begin(), es.end(), rng);
  long removed_weight_events = 0;
  for (int k = 0; k < 40 && rw.alive(); ++k) {
    WitnessChangeReport rep = rw.delete_edge(es[k]);
    if (!rep.removed_witness_edges.empty()) ++removed_weight_events;
    if (!rw.alive()) break;
    // the maintained witness stays within the capacity discipline
    for (int e = 0; e < static_cast<int>(rw.capacities().size()); ++e) {
      CHECK(rw.capacities()[e] >= rw.weight_unit());
      CHECK(rw.capacities()[e] <= 1 / rw.phi_prime());
    }
  }
  CHECK(rw.stats().phases >= 1);
}

TEST_CASE("robust witness deleting an unembedded edge changes nothing") {
  DiGraph g = bidirected_clique(10);
  RobustWitness rw(g, Rat(1, 16));
  REQUIRE(rw.alive());
  // find an edge carrying no embedding path
  int free_edge = -1;
  std::vector<char> used(g.edge_slots(), 0);
  for (const EmbeddedPath& p : rw.witness().embedding.paths)
    for (int e : p.edge_ids) used[e] = 1;
  for (int e : rw.graph().edges())
    if (!used[e]) {
      free_edge = e;
      break;
    }
  if (free_edge >= 0) {
    WitnessChangeReport rep = rw.delete_edge(free_edge);
    CHECK(rep.removed_witness_edges.empty());
    CHECK(rep.pruned_vertices.empty());
    CHECK(!rep.phase_reset);
  }
}

TEST_CASE("robust witness terminates on a split graph") {
  // two K6s joined by a pair of directed edges; deleting them disconnects
  // the graph and the certify gate must return a balanced vertex cut.
  DiGraph g(12);
  for (int base : {0, 6})
    for (int i = base; i < base + 6; ++i)
      for (int j = base; j < base + 6; ++j)
        if (i != j) g.add_edge(i, j, 1);
  int e1 = g.add_edge(0, 6, 1);
  int e2 = g.add_edge(6, 0, 1);
  RobustWitness rw(g, Rat(1, 16));
  if (rw.alive()) {
    for (int e : {e1, e2}) {
      if (!rw.alive()) break;
      rw.delete_edge(e);
    }
    // keep deleting random clique edges until termination or exhaustion
    std::mt19937_64 rng(8);
    std::vector<int> es = rw.graph().edges();
    std::shuffle(es.begin(), es.end(), rng);
    for (int e : es) {
      if (!rw.alive()) break;
      if (!rw.graph().edge_alive(e)) continue;
      rw.delete_edge(e);
    }
  }
  CHECK(!rw.alive());
  if (rw.termination_cut().has_value()) {
    CHECK(!rw.termination_cut()->left.empty());
    CHECK(!rw.termination_cut()->right.empty());
  }
}
