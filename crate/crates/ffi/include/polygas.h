#ifndef POLYGAS_H
#define POLYGAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgCriterion {
  PG_CRITERION_KOTECKY_PREISS = 0,
  PG_CRITERION_DOBRUSHIN = 1,
  PG_CRITERION_IMPROVED_DOBRUSHIN = 2,
  PG_CRITERION_FERNANDEZ_PROCACCI = 3,
} PgCriterion;

typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_POINTER = 1,
  PG_STATUS_INVALID_ARGUMENT = 2,
  PG_STATUS_INDEX_OUT_OF_RANGE = 3,
  PG_STATUS_CAP_EXCEEDED = 4,
  PG_STATUS_OUTSIDE_REGION = 5,
  PG_STATUS_PARSE_ERROR = 6,
  PG_STATUS_CONDITION_FAILS = 7,
  PG_STATUS_DISCONNECTED = 8,
  PG_STATUS_TRUNCATED = 9,
  PG_STATUS_PANIC = 99,
} PgStatus;

/**
 * Opaque interaction graph.
 */
typedef struct PgGraph PgGraph;

typedef struct PgFixedPointInfo {
  size_t iterations;
  bool converged;
  bool diverged;
} PgFixedPointInfo;

typedef struct PgRadius {
  double radius;
  bool attained;
} PgRadius;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph on `n_polymers` polymers from `n_edges` incompatible
 * pairs stored flat in `edges` (`2 * n_edges` entries).
 *
 * # Safety
 * `edges` must hold `2 * n_edges` entries; `out` must be writable.
 */
enum PgStatus pg_graph_new(size_t n_polymers,
                           const size_t *edges,
                           size_t n_edges,
                           struct PgGraph **out);

/**
 * Parses a graph in the text (`n N` then `u v` lines) or JSON format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PgStatus pg_graph_parse(const char *text, struct PgGraph **out);

/**
 * Builds the graph of a builtin model such as `domino:5x5`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum PgStatus pg_graph_from_model(const char *descriptor, struct PgGraph **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void pg_graph_free(struct PgGraph *g);

/**
 * Number of polymers, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t pg_graph_n_polymers(const struct PgGraph *g);

/**
 * `Ξ_Λ(z)` for the volume `lambda`. `z` has one entry per polymer.
 *
 * # Safety
 * Arrays must hold the stated number of entries; `out` must be writable.
 */
enum PgStatus pg_partition_function(const struct PgGraph *g,
                                    const size_t *lambda,
                                    size_t lambda_len,
                                    const double *z,
                                    size_t z_len,
                                    double *out);

/**
 * `φ^T(γ1..γn)`.
 *
 * # Safety
 * `seq` must hold `len` entries; `out` must be writable.
 */
enum PgStatus pg_ursell_coefficient(const struct PgGraph *g,
                                    const size_t *seq,
                                    size_t len,
                                    int64_t *out);

/**
 * Whether `ρ φ(μ) ≤ μ` holds componentwise.
 *
 * # Safety
 * `rho` and `mu` must hold `len` entries; `out` must be writable.
 */
enum PgStatus pg_condition_holds(const struct PgGraph *g,
                                 enum PgCriterion kind,
                                 const double *rho,
                                 const double *mu,
                                 size_t len,
                                 bool *out);

/**
 * Iterates `T_ρ` from `ρ`. On return `rho_star` holds the last iterate
 * and `info` the outcome; divergence is reported through `info`, not the
 * status.
 *
 * # Safety
 * `rho` and `rho_star` must hold `len` entries; `info` must be writable.
 */
enum PgStatus pg_fixed_point(const struct PgGraph *g,
                             enum PgCriterion kind,
                             const double *rho,
                             size_t len,
                             double tol,
                             size_t max_iter,
                             double cap,
                             double *rho_star,
                             struct PgFixedPointInfo *info);

/**
 * Homogeneous radius of a builtin model such as `degree:6`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum PgStatus pg_radius(const char *descriptor, enum PgCriterion kind, struct PgRadius *out);

/**
 * Length in bytes of the last error message on this thread, without the
 * terminating NUL.
 */
size_t pg_last_error_length(void);

/**
 * Copies the last error message, NUL-terminated and truncated to fit, into
 * `buf`. Returns the number of bytes written excluding the NUL.
 *
 * # Safety
 * `buf` must be null or hold `cap` writable bytes.
 */
size_t pg_last_error_message(char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYGAS_H */
