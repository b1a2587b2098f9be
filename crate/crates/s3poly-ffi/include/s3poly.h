/* s3poly C API: closed polygons in the 3-sphere. */

#ifndef S3POLY_H
#define S3POLY_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible call.
typedef enum S3PolyStatus {
  // Success.
  S3_POLY_STATUS_OK = 0,
  // Invalid configuration: side count, radius range, or argument.
  S3_POLY_STATUS_CONFIG = 1,
  // The closure solver exhausted its restarts.
  S3_POLY_STATUS_NO_SOLUTION = 2,
  // Degenerate input: diagonal at 0 or pi, central element, or a
  // tuple on a geodesic.
  S3_POLY_STATUS_DEGENERATE = 3,
  // A verification suite reported failures.
  S3_POLY_STATUS_VERIFY_FAILED = 4,
  // Index out of range.
  S3_POLY_STATUS_BAD_INDEX = 5,
  // A required pointer was null.
  S3_POLY_STATUS_NULL_POINTER = 6,
  // Text input failed to parse (braid word, suite name, UTF-8).
  S3_POLY_STATUS_PARSE = 7,
} S3PolyStatus;

// Opaque holonomy tuple handle.
typedef struct S3PolyTuple S3PolyTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Solve for a closed tuple with the given side lengths (radians,
// each in (0, pi), n >= 3). On success writes a new handle to `out`.
//
// # Safety
// `sides` must point to `n` doubles; `out` must be a valid pointer.
enum S3PolyStatus s3poly_solve(const double *sides,
                               uintptr_t n,
                               uint64_t seed,
                               double tolerance,
                               struct S3PolyTuple **out);

// Build a tuple from `n` quaternions laid out as `[w x y z] * n`.
// Entries are renormalized; classes are read off the entries.
//
// # Safety
// `wxyz` must point to `4 n` doubles; `out` must be a valid pointer.
enum S3PolyStatus s3poly_tuple_from_quaternions(const double *wxyz,
                                                uintptr_t n,
                                                struct S3PolyTuple **out);

// Release a handle. Null is ignored.
//
// # Safety
// `tuple` must be a handle from this library, not yet freed.
void s3poly_tuple_free(struct S3PolyTuple *tuple);

// Number of edges.
//
// # Safety
// `tuple` must be a live handle.
uintptr_t s3poly_tuple_len(const struct S3PolyTuple *tuple);

// Copy the entries out as `[w x y z] * n`.
//
// # Safety
// `out` must have room for `4 n` doubles.
enum S3PolyStatus s3poly_tuple_quaternions(const struct S3PolyTuple *tuple, double *out);

// Copy the side lengths out (n doubles).
//
// # Safety
// `out` must have room for `n` doubles.
enum S3PolyStatus s3poly_tuple_side_lengths(const struct S3PolyTuple *tuple, double *out);

// Distance of the full holonomy product from the identity.
//
// # Safety
// `tuple` must be a live handle.
double s3poly_tuple_closure_residual(const struct S3PolyTuple *tuple);

// Copy the polygon vertices (based at the identity) out as
// `[w x y z] * (n + 1)`.
//
// # Safety
// `out` must have room for `4 (n + 1)` doubles.
enum S3PolyStatus s3poly_tuple_vertices(const struct S3PolyTuple *tuple, double *out);

// Geodesic length of the diagonal between 1-based vertices i < j.
//
// # Safety
// `out` must be a valid pointer.
enum S3PolyStatus s3poly_diagonal_length(const struct S3PolyTuple *tuple,
                                         uintptr_t i,
                                         uintptr_t j,
                                         double *out);

// Bend through `angle` radians about the fan diagonal with prefix
// index `j` (unit angular speed). Writes a new handle.
//
// # Safety
// `out` must be a valid pointer; `tuple` a live handle.
enum S3PolyStatus s3poly_bend(const struct S3PolyTuple *tuple,
                              uintptr_t j,
                              double angle,
                              struct S3PolyTuple **out);

// Apply a braid word such as `"R1 R'2 A13"`. Writes a new handle.
//
// # Safety
// `word` must be a NUL-terminated string; `out` a valid pointer.
enum S3PolyStatus s3poly_braid(const struct S3PolyTuple *tuple,
                               const char *word,
                               struct S3PolyTuple **out);

// Run a verification suite ("algebra", "bracket", "flows", "braid",
// "forms", or "all") with the given seed. Writes the number of
// executed checks and failures through the out-pointers when they are
// non-null. Returns `VerifyFailed` when any check fails.
//
// # Safety
// `suite` must be a NUL-terminated string.
enum S3PolyStatus s3poly_verify(const char *suite,
                                uint64_t seed,
                                uintptr_t *checks_out,
                                uintptr_t *failures_out);

// Static description of a status code.
const char *s3poly_status_message(enum S3PolyStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* S3POLY_H */
