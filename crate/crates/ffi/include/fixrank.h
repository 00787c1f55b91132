#ifndef FIXRANK_H
#define FIXRANK_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum {
  FR_STATUS_OK = 0,
  FR_STATUS_NULL_POINTER = 1,
  // Bad dimensions, metric weights, configuration text or field.
  FR_STATUS_INVALID_ARGUMENT = 2,
  // Input violates a manifold constraint (orthonormality, positive
  // definiteness, tangency, symmetry).
  FR_STATUS_NOT_FEASIBLE = 3,
  FR_STATUS_RANK_DEFICIENT = 4,
  // A numerical routine failed or an internal check tripped.
  FR_STATUS_NUMERICAL = 5,
  FR_STATUS_IO = 6,
  // A Rust panic was caught at the boundary.
  FR_STATUS_PANIC = 7,
} FrStatus;

typedef enum {
  FR_FIELD_REAL = 0,
  FR_FIELD_COMPLEX = 1,
} FrField;

// Solver termination reason reported by [`fr_run_summary`].
typedef enum {
  FR_SOLVER_STATUS_CONVERGED = 0,
  FR_SOLVER_STATUS_MAX_ITERATIONS = 1,
  FR_SOLVER_STATUS_LINE_SEARCH_FAILED = 2,
  FR_SOLVER_STATUS_TRUST_REGION_STALLED = 3,
} FrSolverStatus;

// Opaque point `(U, P, V)` of the fixed-rank manifold.
typedef struct FrPoint FrPoint;

// Opaque result of [`fr_solve`].
typedef struct FrRun FrRun;

// Read-only ambient vector `(U, P, V)` slots of shapes `m x p`, `p x p`,
// `n x p`.
typedef struct {
  const double *u;
  const double *p;
  const double *v;
} FrAmbient;

// Writable ambient vector slots, same shapes as [`FrAmbient`].
typedef struct {
  double *u;
  double *p;
  double *v;
} FrAmbientMut;

// The five metric weights `alpha0, alpha1, beta, gamma0, gamma1`.
typedef struct {
  double alpha0;
  double alpha1;
  double beta;
  double gamma0;
  double gamma1;
} FrMetricParams;

// Copy the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len` bytes). Returns the untruncated length plus one.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t fr_last_error(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *fr_version(void);

// Validate `(U, P, V)` and create a point. Shapes are `m x p`, `p x p`,
// `n x p`.
//
// # Safety
// The slot pointers must hold the documented number of doubles; `out` must
// be valid for writes.
FrStatus fr_point_new(FrField field,
                      size_t m,
                      size_t n,
                      size_t p,
                      FrAmbient factors,
                      FrPoint **out);

// Release a point; null is ignored.
//
// # Safety
// `point` must come from this library and not be used afterwards.
void fr_point_free(FrPoint *point);

// Field and dimensions of a point.
//
// # Safety
// All pointers must be valid.
FrStatus fr_point_shape(const FrPoint *point, FrField *field, size_t *m, size_t *n, size_t *p);

// Copy the factors `(U, P, V)` of a point.
//
// # Safety
// The output slots must have room for the documented shapes.
FrStatus fr_point_factors(const FrPoint *point, FrAmbientMut out);

// The `m x n` matrix `U P Vᵗ`.
//
// # Safety
// `out` must have room for `m n` entries of the point's field.
FrStatus fr_embed(const FrPoint *point, double *out);

// Rank-`p` factorization of the `m x n` matrix `f` by truncated SVD.
//
// # Safety
// `f` must hold `m n` entries of the given field; `out` must be valid.
FrStatus fr_factorize(FrField field, size_t m, size_t n, const double *f, size_t p, FrPoint **out);

// g-orthogonal projection of an ambient vector onto the horizontal space.
//
// # Safety
// Input and output slots must match the point's shapes and field.
FrStatus fr_project_horizontal(const FrPoint *point,
                               const FrMetricParams *params,
                               FrAmbient w,
                               FrAmbientMut out);

// Riemannian gradient from the Euclidean gradient of a cost in `(U, P, V)`.
//
// # Safety
// Input and output slots must match the point's shapes and field.
FrStatus fr_rgrad(const FrPoint *point,
                  const FrMetricParams *params,
                  FrAmbient egrad,
                  FrAmbientMut out);

// Metric inner product of two ambient vectors at a point.
//
// # Safety
// Input slots must match the point's shapes and field; `out` must be valid.
FrStatus fr_metric_inner(const FrPoint *point,
                         const FrMetricParams *params,
                         FrAmbient a,
                         FrAmbient b,
                         double *out);

// Point reached at time `t` along the geodesic with horizontal initial
// velocity `eta`.
//
// # Safety
// `eta` slots must match the point's shapes and field; `out` must be valid.
FrStatus fr_geodesic(const FrPoint *point,
                     const FrMetricParams *params,
                     FrAmbient eta,
                     double t,
                     FrPoint **out);

// Run an experiment described by configuration text (`key = value` lines,
// the format accepted by the `fixrank` command line tool). Nothing is
// written to disk.
//
// # Safety
// `config` must be a NUL-terminated string; `out` must be valid.
FrStatus fr_solve(const char *config, FrRun **out);

// Release a run; null is ignored.
//
// # Safety
// `run` must come from [`fr_solve`] and not be used afterwards.
void fr_run_free(FrRun *run);

// Summary numbers of a run. `gap` is NaN when no optimal value is known.
//
// # Safety
// All pointers must be valid.
FrStatus fr_run_summary(const FrRun *run,
                        FrSolverStatus *status,
                        size_t *iterations,
                        double *final_cost,
                        double *final_gnorm,
                        double *gap);

// Copy the run record as JSON into `buf` (NUL-terminated, truncated to
// `len` bytes). `needed` receives the full length plus one.
//
// # Safety
// `buf` must be null or valid for `len` bytes; `needed` must be valid.
FrStatus fr_run_json(const FrRun *run, char *buf, size_t len, size_t *needed);

#endif  /* FIXRANK_H */
