#ifndef POSORT_H
#define POSORT_H

#pragma once

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PosortStatus {
  POSORT_STATUS_OK = 0,
  POSORT_STATUS_NULL_POINTER,
  POSORT_STATUS_VERTEX_OUT_OF_RANGE,
  POSORT_STATUS_SELF_LOOP,
  POSORT_STATUS_CYCLE_DETECTED,
  POSORT_STATUS_INVALID_PERMUTATION,
  POSORT_STATUS_NOT_AN_EXTENSION,
  POSORT_STATUS_TOO_LARGE,
  POSORT_STATUS_BAD_PARAMS,
  POSORT_STATUS_PARSE,
  POSORT_STATUS_INVALID_UTF8,
  POSORT_STATUS_BUFFER_TOO_SMALL,
  POSORT_STATUS_INTERNAL,
  POSORT_STATUS_PANIC,
} PosortStatus;

/*
 Opaque DAG handle.
 */
typedef struct PosortDag PosortDag;

/*
 Opaque hidden-order handle.
 */
typedef struct PosortOracle PosortOracle;

/*
 Opaque handle to a finished sort and its trace.
 */
typedef struct PosortRun PosortRun;

/*
 Outcome counts of the exact bound checks for one run.
 */
typedef struct PosortCheckSummary {
  uint32_t passed;
  uint32_t failed;
  uint32_t skipped;
  /*
   `log2 e(P_G)`, or NaN when the graph is too large to count.
   */
  double log2_e;
  double sum_log2_d;
} PosortCheckSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static, NUL-terminated description of a status code.
 */
const char *posort_status_message(enum PosortStatus status);

/*
 Builds a DAG on `n` vertices. `edges` holds `2 * edge_count` values,
 each edge as a `(from, to)` pair.

 # Safety
 `edges` must point to `2 * edge_count` readable values unless
 `edge_count` is zero; `out` must be writable.
 */
enum PosortStatus posort_dag_new(uintptr_t n,
                                 const uintptr_t *edges,
                                 uintptr_t edge_count,
                                 struct PosortDag **out);

/*
 Parses the edge-list text format.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PosortStatus posort_dag_parse(const char *text, struct PosortDag **out);

/*
 Vertex count; 0 for NULL.

 # Safety
 `dag` must be NULL or a live handle.
 */
uintptr_t posort_dag_n(const struct PosortDag *dag);

/*
 Distinct edge count; 0 for NULL.

 # Safety
 `dag` must be NULL or a live handle.
 */
uintptr_t posort_dag_m(const struct PosortDag *dag);

/*
 # Safety
 `dag` must be NULL or a handle not yet freed.
 */
void posort_dag_free(struct PosortDag *dag);

/*
 Hidden order from ranks: `ranks[v]` is the position of vertex `v`.
 When `dag` is non-NULL the order must extend it.

 # Safety
 `ranks` must point to `n` readable values; `dag` must be NULL or live;
 `out` must be writable.
 */
enum PosortStatus posort_oracle_from_ranks(const uintptr_t *ranks,
                                           uintptr_t n,
                                           const struct PosortDag *dag,
                                           struct PosortOracle **out);

/*
 Random linear extension of `dag`, deterministic per seed.

 # Safety
 `dag` must be live; `out` must be writable.
 */
enum PosortStatus posort_oracle_sample(const struct PosortDag *dag,
                                       uint64_t seed,
                                       struct PosortOracle **out);

/*
 # Safety
 `oracle` must be NULL or a handle not yet freed.
 */
void posort_oracle_free(struct PosortOracle *oracle);

/*
 Sorts `dag` against `oracle`. The oracle handle is not modified; the run
 counts its own queries from zero.

 # Safety
 `dag` and `oracle` must be live; `out` must be writable.
 */
enum PosortStatus posort_sort(const struct PosortDag *dag,
                              const struct PosortOracle *oracle,
                              struct PosortRun **out);

/*
 Number of vertices in the run's output; 0 for NULL.

 # Safety
 `run` must be NULL or live.
 */
uintptr_t posort_run_len(const struct PosortRun *run);

/*
 Oracle queries the run used; 0 for NULL.

 # Safety
 `run` must be NULL or live.
 */
uint64_t posort_run_queries(const struct PosortRun *run);

/*
 Vertices off the extracted longest path; 0 for NULL.

 # Safety
 `run` must be NULL or live.
 */
uintptr_t posort_run_k(const struct PosortRun *run);

/*
 Copies the sorted order into `buf`, which must hold `posort_run_len`
 values.

 # Safety
 `run` must be live; `buf` must point to `cap` writable values.
 */
enum PosortStatus posort_run_order(const struct PosortRun *run, uintptr_t *buf, uintptr_t cap);

/*
 # Safety
 `run` must be NULL or a handle not yet freed.
 */
void posort_run_free(struct PosortRun *run);

/*
 Exact number of linear extensions, for at most 20 vertices.

 # Safety
 `dag` must be live; the out-pointers must be writable.
 */
enum PosortStatus posort_count_extensions(const struct PosortDag *dag,
                                          uint64_t *out_value,
                                          double *out_log2);

/*
 Runs the exact bound checks on a finished run. `oracle` must be the
 order the run was sorted against.

 # Safety
 All handles must be live; `out` must be writable.
 */
enum PosortStatus posort_run_check(const struct PosortDag *dag,
                                   const struct PosortOracle *oracle,
                                   const struct PosortRun *run,
                                   struct PosortCheckSummary *out);

/*
 Query totals of the two baseline sorts on the same input.

 # Safety
 `dag` and `oracle` must be live; the out-pointers must be writable.
 */
enum PosortStatus posort_baseline_queries(const struct PosortDag *dag,
                                          const struct PosortOracle *oracle,
                                          uint64_t *out_heap_toposort,
                                          uint64_t *out_binary_insertion);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSORT_H */
