#ifndef COMMTUNE_H
#define COMMTUNE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_ARGUMENT = 2,
  // Malformed input data (edge list, labels, partition/graph mismatch).
  CT_STATUS_DATA_ERROR = 3,
  CT_STATUS_IO = 4,
  // The LFR generator could not realize the requested or estimated parameters.
  CT_STATUS_INFEASIBLE_GENERATION = 5,
  CT_STATUS_PANIC = 6,
} CtStatus;

typedef enum CtAlgorithm {
  // Modularity with resolution γ.
  CT_ALGORITHM_LOUVAIN = 0,
  // Planted partition model with resolution γ.
  CT_ALGORITHM_PPM = 1,
  // ILFR with mixing μ.
  CT_ALGORITHM_ILFR = 2,
} CtAlgorithm;

typedef enum CtMetric {
  CT_METRIC_RAND = 0,
  CT_METRIC_JACCARD = 1,
  CT_METRIC_NMI = 2,
} CtMetric;

// Opaque undirected graph.
typedef struct CtGraph CtGraph;

// Opaque vertex partition tied to the graph it was built for.
typedef struct CtPartition CtPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none. The pointer
// stays valid until the next failing call on the same thread.
const char *ct_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ct_version(void);

// Builds a graph on vertices `0..n` from `m` edges `(src[i], dst[i])`.
//
// # Safety
// `src` and `dst` must each point to `m` readable values; `out` must be writable.
enum CtStatus ct_graph_from_edges(size_t n,
                                  const size_t *src,
                                  const size_t *dst,
                                  size_t m,
                                  struct CtGraph **out);

// Reads a whitespace-separated edge list; vertex names are interned.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum CtStatus ct_graph_load_edge_list(const char *path, struct CtGraph **out);

// Number of vertices, 0 for a null handle.
//
// # Safety
// `graph` must be null or a live handle.
size_t ct_graph_num_vertices(const struct CtGraph *graph);

// Number of edges, 0 for a null handle.
//
// # Safety
// `graph` must be null or a live handle.
size_t ct_graph_num_edges(const struct CtGraph *graph);

// Releases a graph; null is ignored.
//
// # Safety
// `graph` must be null or a handle not yet freed.
void ct_graph_free(struct CtGraph *graph);

// Runs the Louvain engine with the given objective. `out_value` may be null.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum CtStatus ct_detect(const struct CtGraph *graph,
                        enum CtAlgorithm algorithm,
                        double param,
                        uint64_t seed,
                        struct CtPartition **out,
                        double *out_value);

// Partition of `graph` from one label per vertex (labels need not be dense).
//
// # Safety
// `labels` must point to `n` readable values; `out` must be writable.
enum CtStatus ct_partition_from_labels(const struct CtGraph *graph,
                                       const size_t *labels,
                                       size_t n,
                                       struct CtPartition **out);

// Number of vertices covered, 0 for a null handle.
//
// # Safety
// `partition` must be null or a live handle.
size_t ct_partition_len(const struct CtPartition *partition);

// Number of non-empty communities, 0 for a null handle.
//
// # Safety
// `partition` must be null or a live handle.
size_t ct_partition_num_communities(const struct CtPartition *partition);

// Copies the community id of each vertex into `buf`, which holds `len` slots.
//
// # Safety
// `partition` must be a live handle; `buf` must have room for `len` values.
enum CtStatus ct_partition_labels(const struct CtPartition *partition, size_t *buf, size_t len);

// Releases a partition; null is ignored.
//
// # Safety
// `partition` must be null or a handle not yet freed.
void ct_partition_free(struct CtPartition *partition);

// Objective value of `partition` on `graph`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum CtStatus ct_objective_value(const struct CtGraph *graph,
                                 const struct CtPartition *partition,
                                 enum CtAlgorithm algorithm,
                                 double param,
                                 double *out);

// Agreement between two partitions of the same vertex set.
//
// # Safety
// Handles must be live; `out` must be writable.
enum CtStatus ct_compare(const struct CtPartition *a,
                         const struct CtPartition *b,
                         enum CtMetric which,
                         double *out);

// Chooses the parameter among `candidates` that best recovers planted communities
// on `n_graphs` LFR graphs shaped like `graph`, `n_runs` detections per cell.
//
// # Safety
// `graph` must be live; `candidates` must hold `count` values; `out` must be writable.
enum CtStatus ct_tune(const struct CtGraph *graph,
                      enum CtAlgorithm algorithm,
                      const double *candidates,
                      size_t count,
                      enum CtMetric which,
                      size_t n_graphs,
                      size_t n_runs,
                      uint64_t seed,
                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMMTUNE_H */
