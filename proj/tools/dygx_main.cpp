// Command-line front end. Talks to the toolkit exclusively through the
// shared-library C API in dygx/dygx.h.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dygx/dygx.h"

namespace {

int fail_with(const std::string& what, dygx_status st) {
  std::cerr << what << ": " << dygx_last_error() << " (status " << st << ")\n";
  return 2;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GraphHandle {
  dygx_graph* g = nullptr;
  ~GraphHandle() { dygx_graph_free(g); }
};
struct TraceHandle {
  dygx_trace* t = nullptr;
  ~TraceHandle() { dygx_trace_free(t); }
};
struct ReportHandle {
  dygx_report* r = nullptr;
  ~ReportHandle() { dygx_report_free(r); }
};

int write_report(dygx_report* r, const std::string& out_path) {
  char* text = nullptr;
  if (dygx_report_json(r, &text) != DYGX_OK) return 2;
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    out << text << "\n";
  }
  dygx_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dygx: decremental directed-graph algorithms toolkit"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "execute a trace against a structure");
  std::string run_mode = "scc", run_graph, run_trace, run_report, run_config;
  bool run_verify = false, run_baseline = false;
  run->add_option("--mode", run_mode, "scc | match | pruning | cutmatch");
  run->add_option("--graph", run_graph, "graph file")->required();
  run->add_option("--trace", run_trace, "trace file");
  run->add_option("--report", run_report, "report output path (default stdout)");
  run->add_option("--config", run_config, "key=value config file");
  run->add_flag("--verify", run_verify, "recompute oracles per update");
  run->add_flag("--baseline", run_baseline, "time the full-recompute baseline");

  // gen-trace
  auto* gen = app.add_subcommand("gen-trace", "generate a deletion trace");
  std::string gen_model = "random", gen_graph, gen_out;
  unsigned long long gen_seed = 7;
  long gen_max = -1;
  gen->add_option("--model", gen_model, "random | adaptive | matched");
  gen->add_option("--graph", gen_graph, "graph file")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--max-deletions", gen_max, "cap deletions");
  gen->add_option("--out", gen_out, "trace output path (default stdout)");

  // flow
  auto* flow = app.add_subcommand("flow", "run a flow-problem file (golden)");
  std::string flow_file, flow_report;
  flow->add_option("--file", flow_file, "flow problem file")->required();
  flow->add_option("--report", flow_report, "report output path");

  // match
  auto* match = app.add_subcommand("match", "decremental matching over a trace");
  std::string match_graph, match_trace, match_report, match_config;
  bool match_verify = false;
  match->add_option("--graph", match_graph, "bipartite graph file")->required();
  match->add_option("--trace", match_trace, "trace file")->required();
  match->add_option("--config", match_config, "key=value config file");
  match->add_option("--report", match_report, "report output path");
  match->add_flag("--verify", match_verify, "exact Hopcroft-Karp per update");

  // bench
  auto* bench = app.add_subcommand("bench", "scaling run over random graphs");
  std::string bench_sizes = "32,64,128", bench_csv;
  unsigned long long bench_seed = 11;
  bench->add_option("--sizes", bench_sizes, "comma separated vertex counts");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--csv", bench_csv, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *match) {
      bool is_match = static_cast<bool>(*match);
      std::string graph_path = is_match ? match_graph : run_graph;
      std::string trace_path = is_match ? match_trace : run_trace;
      std::string config_path = is_match ? match_config : run_config;
      std::string report_path = is_match ? match_report : run_report;
      std::string mode = is_match ? "match" : run_mode;
      bool verify = is_match ? match_verify : run_verify;
      GraphHandle g;
      dygx_status st = dygx_graph_load(graph_path.c_str(), &g.g);
      if (st != DYGX_OK) return fail_with("graph", st);
      TraceHandle t;
      if (!trace_path.empty()) {
        st = dygx_trace_load(trace_path.c_str(), &t.t);
      } else {
        st = dygx_trace_generate(g.g, "random", 7, -1, &t.t);
      }
      if (st != DYGX_OK) return fail_with("trace", st);
      std::string config_text;
      if (!config_path.empty()) config_text = read_file(config_path);
      ReportHandle r;
      st = dygx_run(g.g, t.t, mode.c_str(), config_text.c_str(), verify ? 1 : 0,
                    run_baseline ? 1 : 0, &r.r);
      if (st != DYGX_OK) return fail_with("run", st);
      int wr = write_report(r.r, report_path);
      if (wr != 0) return wr;
      return dygx_report_exit_code(r.r);
    }
    if (*gen) {
      GraphHandle g;
      dygx_status st = dygx_graph_load(gen_graph.c_str(), &g.g);
      if (st != DYGX_OK) return fail_with("graph", st);
      TraceHandle t;
      st = dygx_trace_generate(g.g, gen_model.c_str(), gen_seed, gen_max, &t.t);
      if (st != DYGX_OK) return fail_with("gen-trace", st);
      char* text = nullptr;
      if (dygx_trace_format(t.t, &text) != DYGX_OK)
        return fail_with("format", DYGX_ERR_UNKNOWN);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        out << text;
      }
      dygx_string_free(text);
      return 0;
    }
    if (*flow) {
      std::string text = read_file(flow_file);
      ReportHandle r;
      dygx_status st = dygx_run_flow_text(text.c_str(), &r.r);
      if (st != DYGX_OK) return fail_with("flow", st);
      int wr = write_report(r.r, flow_report);
      if (wr != 0) return wr;
      return dygx_report_exit_code(r.r);
    }
    if (*bench) {
      std::vector<int> sizes;
      std::stringstream ss(bench_sizes);
      std::string item;
      while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
      std::ostringstream csv;
      csv << "n,m,deletions,oracle_ms,slope_so_far\n";
      std::vector<std::pair<double, double>> points;
      for (int n : sizes) {
        GraphHandle g;
        dygx_status st = dygx_graph_random(n, 4 * n, bench_seed, 1, &g.g);
        if (st != DYGX_OK) return fail_with("graph", st);
        TraceHandle t;
        st = dygx_trace_generate(g.g, "random", bench_seed + n, -1, &t.t);
        if (st != DYGX_OK) return fail_with("trace", st);
        auto t0 = std::chrono::steady_clock::now();
        ReportHandle r;
        st = dygx_run(g.g, t.t, "scc", "", 0, 0, &r.r);
        if (st != DYGX_OK) return fail_with("bench run", st);
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        points.push_back({static_cast<double>(n), ms});
        double slope = 0;
        if (points.size() >= 2) {
          double sx = 0, sy = 0, sxx = 0, sxy = 0;
          for (auto [x, y] : points) {
            double lx = std::log(x), ly = std::log(std::max(y, 1e-9));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
          }
          double k = static_cast<double>(points.size());
          slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        }
        csv << n << ',' << dygx_graph_edge_count(g.g) << ','
            << dygx_trace_op_count(t.t) << ',' << ms << ',' << slope << "\n";
      }
      if (bench_csv.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(bench_csv);
        out << csv.str();
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
