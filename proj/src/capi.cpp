#include "dygx/dygx.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include "dygx/graph_io.hpp"
#include "dygx/runner.hpp"
#include "dygx/scc.hpp"
#include "dygx/scc_oracle.hpp"
#include "dygx/trace.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
dygx_status guarded(Fn&& fn) {
  try {
    fn();
    return DYGX_OK;
  } catch (const dygx::input_error& e) {
    set_error(e.what());
    return DYGX_ERR_INVALID_ARGUMENT;
  } catch (const dygx::verify_error& e) {
    set_error(e.what());
    return DYGX_ERR_VERIFY;
  } catch (const dygx::contract_error& e) {
    set_error(e.what());
    return DYGX_ERR_CONTRACT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DYGX_ERR_UNKNOWN;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct dygx_graph {
  dygx::DiGraph g;
  dygx::Int denominator = 1;
};

struct dygx_trace {
  dygx::Trace t;
};

struct dygx_report {
  nlohmann::json j;
};

struct dygx_oracle {
  dygx::SccOracle oracle;
  explicit dygx_oracle(const dygx::DiGraph& g, dygx::SccOracleOptions opt)
      : oracle(g, std::move(opt)) {}
};

extern "C" {

const char* dygx_last_error(void) { return g_last_error.c_str(); }

void dygx_string_free(char* s) { std::free(s); }
void dygx_ints_free(int* p) { std::free(p); }

dygx_status dygx_graph_parse(const char* text, dygx_graph** out) {
  if (!text || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::LoadedGraph lg = dygx::parse_graph_text(text);
    *out = new dygx_graph{std::move(lg.graph), lg.denominator};
  });
}

dygx_status dygx_graph_load(const char* path, dygx_graph** out) {
  if (!path || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::LoadedGraph lg = dygx::load_graph_file(path);
    *out = new dygx_graph{std::move(lg.graph), lg.denominator};
  });
}

dygx_status dygx_graph_format(const dygx_graph* g, char** out_text) {
  if (!g || !out_text) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded(
      [&] { *out_text = dup_string(dygx::format_graph(g->g, g->denominator)); });
}

dygx_status dygx_graph_random(int n, int extra_edges, unsigned long long seed,
                              int strongly_connected, dygx_graph** out) {
  if (!out || n <= 0) {
    set_error("bad arguments");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::mt19937_64 rng(seed);
    dygx::DiGraph g(n);
    if (strongly_connected)
      for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
    for (int k = 0; k < extra_edges; ++k) {
      int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
      g.add_edge(u, v, 1);
    }
    *out = new dygx_graph{std::move(g), 1};
  });
}

void dygx_graph_free(dygx_graph* g) { delete g; }

int dygx_graph_vertex_count(const dygx_graph* g) {
  return g ? g->g.num_vertices() : 0;
}

int dygx_graph_edge_count(const dygx_graph* g) {
  return g ? g->g.num_edges() : 0;
}

dygx_status dygx_graph_delete_edge(dygx_graph* g, int u, int v) {
  if (!g) {
    set_error("null graph");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    int e = g->g.find_edge(u, v);
    if (e < 0) throw dygx::input_error("edge not present");
    g->g.delete_edge(e);
  });
}

dygx_status dygx_trace_generate(const dygx_graph* g, const char* model,
                                unsigned long long seed, long max_deletions,
                                dygx_trace** out) {
  if (!g || !model || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::TraceParams params;
    params.seed = seed;
    params.max_deletions = max_deletions;
    std::string m = model;
    dygx::Trace t;
    if (m == "random") {
      t = dygx::gen_trace_random(g->g, params);
    } else if (m == "adaptive") {
      t = dygx::gen_trace_adaptive(g->g, params);
    } else if (m == "matched") {
      auto [left, right] = dygx::bipartite_split(g->g);
      if (left.size() > right.size()) std::swap(left, right);
      t = dygx::gen_trace_matched(g->g, left, right, dygx::Rat(1, 10), params);
    } else {
      throw dygx::input_error("unknown trace model: " + m);
    }
    *out = new dygx_trace{std::move(t)};
  });
}

dygx_status dygx_trace_load(const char* path, dygx_trace** out) {
  if (!path || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = new dygx_trace{dygx::load_trace_file(path)}; });
}

dygx_status dygx_trace_parse(const char* text, dygx_trace** out) {
  if (!text || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = new dygx_trace{dygx::parse_trace_text(text)}; });
}

dygx_status dygx_trace_format(const dygx_trace* t, char** out_text) {
  if (!t || !out_text) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out_text = dup_string(dygx::format_trace(t->t)); });
}

size_t dygx_trace_op_count(const dygx_trace* t) {
  return t ? t->t.ops.size() : 0;
}

void dygx_trace_free(dygx_trace* t) { delete t; }

dygx_status dygx_run(const dygx_graph* g, const dygx_trace* t, const char* mode,
                     const char* config_text, int verify, int baseline,
                     dygx_report** out) {
  if (!g || !t || !mode || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::Config cfg = dygx::Config::parse(config_text ? config_text : "");
    nlohmann::json rep =
        dygx::run_mode(mode, g->g, t->t, cfg, verify != 0, baseline != 0);
    *out = new dygx_report{std::move(rep)};
  });
}

dygx_status dygx_run_flow_text(const char* text, dygx_report** out) {
  if (!text || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::FlowInstance inst = dygx::parse_flow_text(text);
    *out = new dygx_report{dygx::run_flow_golden(inst)};
  });
}

dygx_status dygx_report_json(const dygx_report* r, char** out_text) {
  if (!r || !out_text) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out_text = dup_string(r->j.dump(2)); });
}

int dygx_report_exit_code(const dygx_report* r) {
  if (!r) return 2;
  return dygx::report_exit_code(r->j);
}

void dygx_report_free(dygx_report* r) { delete r; }

dygx_status dygx_oracle_create(const dygx_graph* g, const char* config_text,
                               dygx_oracle** out) {
  if (!g || !out) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::Config cfg = dygx::Config::parse(config_text ? config_text : "");
    dygx::SccOracleOptions opt;
    if (cfg.has("phi_star"))
      opt.phi_star = cfg.get_rat("phi_star", dygx::Rat(1, 4));
    opt.oracle_levels = static_cast<int>(cfg.get_long("q", 1));
    *out = new dygx_oracle(g->g, std::move(opt));
  });
}

dygx_status dygx_oracle_delete_edge(dygx_oracle* o, int u, int v) {
  if (!o) {
    set_error("null oracle");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    int e = o->oracle.graph().find_edge(u, v);
    if (e < 0) throw dygx::input_error("edge not present");
    o->oracle.delete_edge(e);
  });
}

dygx_status dygx_oracle_same_scc(dygx_oracle* o, int u, int v, int* out_same) {
  if (!o || !out_same) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out_same = o->oracle.same_scc(u, v) ? 1 : 0; });
}

dygx_status dygx_oracle_query_path(dygx_oracle* o, int u, int v,
                                   int** out_vertices, size_t* out_len) {
  if (!o || !out_vertices || !out_len) {
    set_error("null argument");
    return DYGX_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    dygx::SccOracle::PathResult pr = o->oracle.query_path(u, v);
    if (!pr.connected) {
      *out_vertices = nullptr;
      *out_len = 0;
      return;
    }
    int* buf = static_cast<int*>(std::malloc(sizeof(int) * pr.vertices.size()));
    for (size_t i = 0; i < pr.vertices.size(); ++i) buf[i] = pr.vertices[i];
    *out_vertices = buf;
    *out_len = pr.vertices.size();
  });
}

void dygx_oracle_free(dygx_oracle* o) { delete o; }

}  // extern "C"
