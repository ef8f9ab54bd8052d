#ifndef SPLITTER_H
#define SPLITTER_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SplitterStatus {
  SPLITTER_STATUS_OK = 0,
  SPLITTER_STATUS_NULL_POINTER = 1,
  SPLITTER_STATUS_INVALID_ARGUMENT = 2,
  SPLITTER_STATUS_PARSE_ERROR = 3,
  SPLITTER_STATUS_TOO_LARGE = 4,
  SPLITTER_STATUS_ILLEGAL_MOVE = 5,
  SPLITTER_STATUS_WRONG_PHASE = 6,
  SPLITTER_STATUS_ANALYSIS_DISABLED = 7,
  SPLITTER_STATUS_BUFFER_TOO_SMALL = 8,
  SPLITTER_STATUS_INTERNAL = 9,
} SplitterStatus;

typedef enum SplitterRole {
  SPLITTER_ROLE_CONNECTOR = 0,
  SPLITTER_ROLE_SPLITTER = 1,
} SplitterRole;

// Solver bound to one graph and radius; keeps its memo between calls.
typedef struct SplitterEngine SplitterEngine;

// Game session against the engine.
typedef struct SplitterGame SplitterGame;

// Immutable graph.
typedef struct SplitterGraph SplitterGraph;

typedef struct SplitterEngineOptions {
  bool dominance_pruning;
  bool sandwich_exit;
  bool component_split;
  size_t vertex_limit;
} SplitterEngineOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *splitter_last_error(void);

void splitter_string_free(char *s);

// Parses an edge list: optional `#` comments, an `n m` header, then `m`
// lines `u v`.
enum SplitterStatus splitter_graph_from_edge_list(const char *text, struct SplitterGraph **out);

// Parses `{"n": .., "edges": [[u, v], ..]}`.
enum SplitterStatus splitter_graph_from_json(const char *text, struct SplitterGraph **out);

// Builds a graph from an inline family spec such as `family=grid,rows=3,cols=4`.
enum SplitterStatus splitter_graph_generate(const char *spec,
                                            uint64_t seed,
                                            struct SplitterGraph **out);

size_t splitter_graph_vertex_count(const struct SplitterGraph *graph);

size_t splitter_graph_edge_count(const struct SplitterGraph *graph);

void splitter_graph_free(struct SplitterGraph *graph);

struct SplitterEngineOptions splitter_engine_options_default(void);

// `options` may be null for the defaults. The engine keeps its own
// reference to the graph.
enum SplitterStatus splitter_engine_new(const struct SplitterGraph *graph,
                                        uint32_t radius_value,
                                        const struct SplitterEngineOptions *options,
                                        struct SplitterEngine **out);

void splitter_engine_free(struct SplitterEngine *engine);

enum SplitterStatus splitter_engine_rank(struct SplitterEngine *engine, size_t *out);

// Writes the progressing replies to Connector move `connector` into
// `buf[0..*len]`. When `cap` is too small, returns `SPLITTER_STATUS_BUFFER_TOO_SMALL` and
// still stores the needed length in `*len`.
enum SplitterStatus splitter_engine_progressing(struct SplitterEngine *engine,
                                                size_t connector,
                                                size_t *buf,
                                                size_t cap,
                                                size_t *len);

// Full analysis as JSON: rank, optimal Connector moves, and per move the
// ball, its rank, Splitter's best replies and the progressing set.
enum SplitterStatus splitter_engine_analysis_json(struct SplitterEngine *engine, char **out);

// Witness certificate JSON: `{"rank", "h", "levels": [...]}`.
enum SplitterStatus splitter_engine_witness_json(struct SplitterEngine *engine, char **out);

// Bound table for `k = 1..=max_k` as JSON with decimal-string values.
enum SplitterStatus splitter_bounds_json(size_t max_k, uint32_t radius_value, char **out);

// Starts a game. When the human plays Splitter the engine has already made
// its first Connector move on return.
enum SplitterStatus splitter_game_new(const struct SplitterGraph *graph,
                                      uint32_t radius_value,
                                      enum SplitterRole human_role,
                                      bool analysis,
                                      struct SplitterGame **out);

void splitter_game_free(struct SplitterGame *game);

// Game state in the same JSON shape as the HTTP API.
enum SplitterStatus splitter_game_state_json(const struct SplitterGame *game, char **out);

// Plays the human's move and lets the engine answer. `*engine_reply` is the
// engine's vertex, or -1 when the game ended first.
enum SplitterStatus splitter_game_move(struct SplitterGame *game,
                                       size_t vertex,
                                       int64_t *engine_reply);

// Rank of the next arena if the pending ball lost `vertex`.
enum SplitterStatus splitter_game_what_if(struct SplitterGame *game,
                                          size_t vertex,
                                          size_t *resulting_rank,
                                          bool *progressing);

bool splitter_game_is_finished(const struct SplitterGame *game);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPLITTER_H */
