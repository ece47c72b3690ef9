#include "graph_io.hpp"

#include <fstream>
#include <sstream>

namespace dygx {

LoadedGraph parse_graph(std::istream& in) {
  long long n, m;
  Int d;
  if (!(in >> n >> m >> d)) throw input_error("graph header: expected `n m d`");
  if (n < 0 || m < 0 || d <= 0) throw input_error("graph header: bad values");
  LoadedGraph lg;
  lg.denominator = d;
  lg.graph.reset(static_cast<int>(n));
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    Int w;
    if (!(in >> u >> v >> w)) throw input_error("graph body: expected `u v w_num`");
    if (u < 0 || u >= n || v < 0 || v >= n) throw input_error("graph body: vertex out of range");
    if (w < 0) throw input_error("graph body: negative weight");
    lg.graph.add_edge(static_cast<int>(u), static_cast<int>(v), Rat(w) / Rat(d));
  }
  return lg;
}

LoadedGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

LoadedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open graph file: " + path);
  return parse_graph(in);
}

std::string format_graph(const DiGraph& g, const Int& d) {
  std::ostringstream out;
  std::vector<int> es = g.edges();
  out << g.vertex_slots() << ' ' << es.size() << ' ' << d << '\n';
  for (int e : es) {
    const Edge& ed = g.edge(e);
    Rat scaled = ed.w * d;
    if (!is_integral(scaled))
      throw input_error("format_graph: weight not a multiple of 1/d");
    out << ed.tail << ' ' << ed.head << ' ' << rat_num(scaled) << '\n';
  }
  return out.str();
}

DiGraph directed_cycle(int n) {
  DiGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
  return g;
}

DiGraph directed_path(int n) {
  DiGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, 1);
  return g;
}

DiGraph bidirected_clique(int n) {
  DiGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.add_edge(i, j, 1);
  return g;
}

DiGraph bidirected_cycle(int n) {
  DiGraph g(n);
  for (int i = 0; i < n; ++i) {
    g.add_edge(i, (i + 1) % n, 1);
    g.add_edge((i + 1) % n, i, 1);
  }
  return g;
}

}  // namespace dygx
