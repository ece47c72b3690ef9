#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "flow_kernel.hpp"
#include "trace.hpp"

namespace dygx {

// key=value configuration (one pair per line, '#' comments).
struct Config {
  std::map<std::string, std::string> values;

  static Config parse(const std::string& text);
  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& dflt) const;
  long get_long(const std::string& key, long dflt) const;
  Rat get_rat(const std::string& key, const Rat& dflt) const;  // "num/den"
};

// Flow-problem text format: `FLOW n m d h z`, then `S v num`, `T v num`,
// `C u v num` lines (numerators over d).
struct FlowInstance {
  DiGraph graph;
  FlowProblem problem;
  Int h = 1;
  Rat z = 0;
};

FlowInstance parse_flow_text(const std::string& text);
FlowInstance load_flow_file(const std::string& path);

// Batch runner: executes a trace in the given mode and emits a report with a
// deterministic payload section; timings live outside it. Any `fail` verdict
// makes `passed` false.
nlohmann::json run_mode(const std::string& mode, const DiGraph& graph,
                        const Trace& trace, const Config& config, bool verify,
                        bool baseline);

nlohmann::json run_flow_golden(const FlowInstance& inst);

// 0 = all pass (possibly with `unverified` warnings), 1 = any fail.
int report_exit_code(const nlohmann::json& report);

// log-log least-squares slope fit over (size, time) pairs; reported only.
double loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace dygx
