#include "trace.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "matching.hpp"
#include "scc_oracle.hpp"

namespace dygx {

namespace {

// Explicit Fisher-Yates so traces are reproducible across platforms.
template <typename T>
void shuffle_seeded(std::vector<T>& xs, std::mt19937_64& rng) {
  for (size_t i = xs.size(); i > 1; --i)
    std::swap(xs[i - 1], xs[rng() % i]);
}

}  // namespace

Trace gen_trace_random(const DiGraph& g, const TraceParams& params) {
  Trace t;
  t.model = "random";
  t.seed = params.seed;
  std::mt19937_64 rng(params.seed);
  std::vector<int> order = g.edges();
  shuffle_seeded(order, rng);
  std::vector<int> verts = g.vertices();
  long count = 0;
  for (int e : order) {
    if (params.max_deletions >= 0 && count >= params.max_deletions) break;
    t.ops.push_back({'D', g.edge(e).tail, g.edge(e).head});
    ++count;
    if (params.query_stride > 0 && count % params.query_stride == 0 &&
        verts.size() >= 2) {
      int u = verts[rng() % verts.size()];
      int v = verts[rng() % verts.size()];
      t.ops.push_back({'Q', u, v});
      t.ops.push_back({'P', u, v});
    }
  }
  return t;
}

Trace gen_trace_adaptive(const DiGraph& g, const TraceParams& params) {
  Trace t;
  t.model = "adaptive";
  t.seed = params.seed;
  std::mt19937_64 rng(params.seed);
  DiGraph shadow = g;
  SccOracle oracle(g);
  std::vector<int> verts = g.vertices();
  long guard = 2 * g.num_edges() + 16;
  while (shadow.num_edges() > 0 && guard-- > 0) {
    if (params.max_deletions >= 0 &&
        static_cast<long>(t.ops.size()) >= 3 * params.max_deletions)
      break;
    // pick a strongly connected pair and ask for a path
    int u = verts[rng() % verts.size()];
    int v = verts[rng() % verts.size()];
    int victim = -1;
    if (u != v && oracle.same_scc(u, v)) {
      auto pr = oracle.query_path(u, v);
      t.ops.push_back({'P', u, v});
      for (size_t i = 0; i + 1 < pr.vertices.size(); ++i) {
        int e = shadow.find_edge(pr.vertices[i], pr.vertices[i + 1]);
        if (e >= 0) {
          victim = e;
          break;
        }
      }
    }
    if (victim < 0) {
      // no usable path; fall back to a random surviving edge
      std::vector<int> alive = shadow.edges();
      if (alive.empty()) break;
      victim = alive[rng() % alive.size()];
    }
    t.ops.push_back({'D', shadow.edge(victim).tail, shadow.edge(victim).head});
    oracle.delete_edge(victim);
    shadow.delete_edge(victim);
  }
  return t;
}

Trace gen_trace_matched(const DiGraph& g, const std::vector<int>& left,
                        const std::vector<int>& right, const Rat& eps,
                        const TraceParams& params) {
  Trace t;
  t.model = "matched";
  t.seed = params.seed;
  std::mt19937_64 rng(params.seed);
  DiGraph shadow = g;
  DecrementalMatching dm(g, left, right, eps);
  while (shadow.num_edges() > 0) {
    t.ops.push_back({'M', -1, -1});
    // pick a matched edge if any value survives, else any edge
    std::vector<int> carrying;
    for (int e : shadow.edges())
      if (dm.matching().size() > static_cast<size_t>(e) && dm.matching()[e] > 0)
        carrying.push_back(e);
    std::vector<int> pool = carrying.empty() ? shadow.edges() : carrying;
    int victim = pool[rng() % pool.size()];
    t.ops.push_back({'D', shadow.edge(victim).tail, shadow.edge(victim).head});
    dm.delete_edge(victim);
    shadow.delete_edge(victim);
  }
  return t;
}

std::string format_trace(const Trace& t) {
  std::ostringstream out;
  out << "TRACE " << t.model << ' ' << t.seed << ' ' << t.ops.size() << '\n';
  for (const TraceOp& op : t.ops) {
    out << op.kind;
    if (op.kind != 'M') out << ' ' << op.u << ' ' << op.v;
    out << '\n';
  }
  return out.str();
}

Trace parse_trace_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  Trace t;
  size_t count = 0;
  if (!(in >> tag >> t.model >> t.seed >> count) || tag != "TRACE")
    throw input_error("trace header: expected `TRACE model seed count`");
  for (size_t i = 0; i < count; ++i) {
    TraceOp op;
    if (!(in >> op.kind)) throw input_error("trace body: truncated");
    if (op.kind != 'M') {
      if (!(in >> op.u >> op.v)) throw input_error("trace body: expected u v");
    }
    if (op.kind != 'D' && op.kind != 'Q' && op.kind != 'P' && op.kind != 'M')
      throw input_error("trace body: unknown op kind");
    t.ops.push_back(op);
  }
  return t;
}

Trace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open trace file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trace_text(ss.str());
}

std::pair<std::vector<int>, std::vector<int>> bipartite_split(const DiGraph& g) {
  // left = vertices with out-edges or no edges at all up to the first head
  std::vector<char> is_head(g.vertex_slots(), 0), is_tail(g.vertex_slots(), 0);
  for (int e : g.edges()) {
    is_tail[g.edge(e).tail] = 1;
    is_head[g.edge(e).head] = 1;
  }
  std::vector<int> left, right;
  for (int v : g.vertices()) {
    if (is_tail[v] && is_head[v])
      throw input_error("bipartite_split: vertex on both sides");
    if (is_tail[v])
      left.push_back(v);
    else if (is_head[v])
      right.push_back(v);
    else if (left.size() <= right.size())
      left.push_back(v);
    else
      right.push_back(v);
  }
  return {left, right};
}

}  // namespace dygx
