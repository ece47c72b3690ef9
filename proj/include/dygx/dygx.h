#ifndef DYGX_H
#define DYGX_H

/* C interface to the decremental directed-graph toolkit. All functions
 * return DYGX_OK on success; on failure dygx_last_error() describes the
 * problem (thread-local). Objects are opaque and freed with their matching
 * *_free function. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  DYGX_OK = 0,
  DYGX_ERR_INVALID_ARGUMENT = 1,
  DYGX_ERR_PARSE = 2,
  DYGX_ERR_VERIFY = 3,
  DYGX_ERR_CONTRACT = 4,
  DYGX_ERR_UNKNOWN = 5
} dygx_status;

typedef struct dygx_graph dygx_graph;
typedef struct dygx_trace dygx_trace;
typedef struct dygx_report dygx_report;
typedef struct dygx_oracle dygx_oracle;

const char* dygx_last_error(void);
void dygx_string_free(char* s);
void dygx_ints_free(int* p);

/* Graphs use the text format `n m d` + `u v w_num` lines. */
dygx_status dygx_graph_parse(const char* text, dygx_graph** out);
dygx_status dygx_graph_load(const char* path, dygx_graph** out);
dygx_status dygx_graph_format(const dygx_graph* g, char** out_text);
dygx_status dygx_graph_random(int n, int extra_edges, unsigned long long seed,
                              int strongly_connected, dygx_graph** out);
void dygx_graph_free(dygx_graph* g);
int dygx_graph_vertex_count(const dygx_graph* g);
int dygx_graph_edge_count(const dygx_graph* g);
dygx_status dygx_graph_delete_edge(dygx_graph* g, int u, int v);

/* Traces: models are "random", "adaptive", "matched". */
dygx_status dygx_trace_generate(const dygx_graph* g, const char* model,
                                unsigned long long seed, long max_deletions,
                                dygx_trace** out);
dygx_status dygx_trace_load(const char* path, dygx_trace** out);
dygx_status dygx_trace_parse(const char* text, dygx_trace** out);
dygx_status dygx_trace_format(const dygx_trace* t, char** out_text);
size_t dygx_trace_op_count(const dygx_trace* t);
void dygx_trace_free(dygx_trace* t);

/* Batch execution; mode is one of "scc", "match", "pruning", "cutmatch".
 * config_text holds key=value lines and may be NULL. */
dygx_status dygx_run(const dygx_graph* g, const dygx_trace* t, const char* mode,
                     const char* config_text, int verify, int baseline,
                     dygx_report** out);
dygx_status dygx_run_flow_text(const char* text, dygx_report** out);
dygx_status dygx_report_json(const dygx_report* r, char** out_text);
/* 0 = pass, 1 = verification failure. */
int dygx_report_exit_code(const dygx_report* r);
void dygx_report_free(dygx_report* r);

/* Incremental access to the decremental SCC oracle. */
dygx_status dygx_oracle_create(const dygx_graph* g, const char* config_text,
                               dygx_oracle** out);
dygx_status dygx_oracle_delete_edge(dygx_oracle* o, int u, int v);
dygx_status dygx_oracle_same_scc(dygx_oracle* o, int u, int v, int* out_same);
/* Writes a malloc'd vertex sequence (simple path u..v); empty with len 0
 * when the endpoints are not strongly connected. */
dygx_status dygx_oracle_query_path(dygx_oracle* o, int u, int v,
                                   int** out_vertices, size_t* out_len);
void dygx_oracle_free(dygx_oracle* o);

#ifdef __cplusplus
}
#endif

#endif /* DYGX_H */
