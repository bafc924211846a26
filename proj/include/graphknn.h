#ifndef GRAPHKNN_H
#define GRAPHKNN_H

/* graphknn -- k nearest neighbors under shortest-path distance, for every
 * vertex of a positively weighted directed graph.
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads concurrently; a single handle must not be mutated from
 * two threads at once (graphs and tables are immutable once created).
 *
 * Functions returning gknn_status set a thread-local error message on
 * failure, retrievable via gknn_last_error().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GKNN_API __declspec(dllexport)
#else
#define GKNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gknn_graph gknn_graph; /* immutable weighted digraph */
typedef struct gknn_table gknn_table; /* per-vertex neighbor lists   */

typedef enum gknn_status {
  GKNN_OK = 0,
  GKNN_ERR_PARSE = 1,       /* malformed input text (see gknn_last_error) */
  GKNN_ERR_INVALID_ARG = 2, /* bad parameter or flag combination */
  GKNN_ERR_IO = 3,          /* file could not be opened or read */
  GKNN_ERR_NOMEM = 4,
  GKNN_ERR_INTERNAL = 5
} gknn_status;

typedef enum gknn_format {
  GKNN_FORMAT_AUTO = 0, /* sniff: DIMACS if the first mark is 'c' or 'p' */
  GKNN_FORMAT_EDGELIST = 1,
  GKNN_FORMAT_DIMACS = 2
} gknn_format;

/* Membership structure used by the fast algorithm. Both produce identical
 * tables; BOUNDED keeps only the k smallest candidates per vertex in
 * ordered containers and uses no hashing. */
typedef enum gknn_mode { GKNN_MODE_HASHED = 0, GKNN_MODE_BOUNDED = 1 } gknn_mode;

/* Operation counters filled by the fast algorithm. */
typedef struct gknn_run_stats {
  uint64_t relax_ops;       /* edge relaxations attempted */
  uint64_t global_extracts; /* extract-min on the global vertex queue */
  uint64_t local_extracts;  /* extract-min on per-vertex queues */
  uint64_t events_inserted; /* insertions into per-vertex queues */
  uint64_t decrease_keys;   /* key decreases in per-vertex queues */
} gknn_run_stats;

/* Message describing the most recent failure in the calling thread.
 * Valid until the next failing call on the same thread. Never NULL. */
GKNN_API const char* gknn_last_error(void);

GKNN_API const char* gknn_version(void);

/* ---- graphs ---------------------------------------------------------- */

/* Decide the format of a graph text when the caller passed AUTO. */
GKNN_API gknn_format gknn_format_detect(const char* text, size_t len);

/* Parse graph text. Formats:
 *   edgelist: header "n m", then m lines "u v w" (0-based, w > 0 decimal),
 *             '#' starts a comment line.
 *   dimacs:   "c" comments, one "p sp n m" line, m lines "a u v w"
 *             (1-based, positive integer w).
 * Errors carry the offending line number in gknn_last_error(). */
GKNN_API gknn_status gknn_graph_parse(const char* text, size_t len,
                                      gknn_format format, gknn_graph** out);

/* Read a file and parse it. */
GKNN_API gknn_status gknn_graph_load(const char* path, gknn_format format,
                                     gknn_graph** out);

/* Build a graph from parallel edge arrays (ids 0-based, weights > 0). */
GKNN_API gknn_status gknn_graph_from_edges(uint32_t n, size_t m,
                                           const uint32_t* src,
                                           const uint32_t* dst,
                                           const double* weight,
                                           gknn_graph** out);

/* Seeded G(n, m): m distinct directed non-loop edges chosen uniformly,
 * integer weights uniform in [weight_min, weight_max]. Deterministic for a
 * given seed across platforms. */
GKNN_API gknn_status gknn_graph_random(uint32_t n, uint64_t m,
                                       uint64_t weight_min, uint64_t weight_max,
                                       uint64_t seed, gknn_graph** out);

/* Transposed copy: every edge (u, v, w) becomes (v, u, w). */
GKNN_API gknn_status gknn_graph_reverse(const gknn_graph* g, gknn_graph** out);

GKNN_API uint32_t gknn_graph_vertex_count(const gknn_graph* g);
GKNN_API uint64_t gknn_graph_edge_count(const gknn_graph* g);
GKNN_API void gknn_graph_free(gknn_graph* g);

/* ---- k nearest neighbors --------------------------------------------- */

/* For every vertex v, the min(k, reachable-source count) sources u with the
 * smallest (distance(u->v), u), in that lexicographic order. Ties are broken
 * by source id, so the table is unique and bit-reproducible. `stats` may be
 * NULL. */
GKNN_API gknn_status gknn_knn_all(const gknn_graph* g, uint32_t k,
                                  gknn_mode mode, gknn_table** out,
                                  gknn_run_stats* stats);

/* Same, but only vertices listed in `terminals` act as sources. */
GKNN_API gknn_status gknn_knn_terminals(const gknn_graph* g, uint32_t k,
                                        const uint32_t* terminals,
                                        size_t terminal_count, gknn_mode mode,
                                        gknn_table** out,
                                        gknn_run_stats* stats);

/* Monte Carlo sampling algorithm: gknn_round_count(n, k, confidence)
 * independent multi-source Dijkstra rounds, each seeded with every vertex
 * independently with probability 1/k. With probability at least
 * 1 - n^-(confidence-2) the result equals gknn_knn_all; any entry it does
 * emit is exact, failures can only omit entries. confidence >= 3.
 * threads = 0 or 1 runs serially; higher values run rounds concurrently
 * without changing the output. */
GKNN_API gknn_status gknn_knn_randomized(const gknn_graph* g, uint32_t k,
                                         uint32_t confidence, uint64_t seed,
                                         uint32_t threads, gknn_table** out);

/* Brute-force reference: one full Dijkstra per vertex. Exact and slow;
 * intended for verification at small scale. `terminals` may be NULL. */
GKNN_API gknn_status gknn_knn_brute_force(const gknn_graph* g, uint32_t k,
                                          const uint32_t* terminals,
                                          size_t terminal_count,
                                          uint32_t threads, gknn_table** out);

/* Number of sampling rounds ceil(10 * confidence * k * ln n) used by the
 * randomized algorithm. Requires n >= 2, k >= 1, confidence >= 3. */
GKNN_API uint64_t gknn_round_count(uint32_t n, uint32_t k, uint32_t confidence);

/* ---- tables ---------------------------------------------------------- */

GKNN_API uint32_t gknn_table_k(const gknn_table* t);
GKNN_API uint32_t gknn_table_vertex_count(const gknn_table* t);
GKNN_API uint32_t gknn_table_row_size(const gknn_table* t, uint32_t v);

/* Entry `rank` of row `v` (rank 0 is the nearest source). */
GKNN_API gknn_status gknn_table_entry(const gknn_table* t, uint32_t v,
                                      uint32_t rank, uint32_t* source,
                                      double* distance);

/* 1 if both tables have identical rows (sources and bit-identical
 * distances), else 0. */
GKNN_API int gknn_table_equal(const gknn_table* a, const gknn_table* b);

/* Render the table, one entry per line: "v<TAB>rank<TAB>source<TAB>distance"
 * in ascending (v, rank) order. Integer-valued distances print without a
 * decimal point; others as the shortest round-tripping decimal. Free the
 * result with gknn_string_free. */
GKNN_API gknn_status gknn_table_to_string(const gknn_table* t, char** out);

GKNN_API void gknn_string_free(char* s);
GKNN_API void gknn_table_free(gknn_table* t);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHKNN_H */
