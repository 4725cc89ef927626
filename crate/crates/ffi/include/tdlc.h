#ifndef TDLC_H
#define TDLC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a library call.
typedef enum TdlcStatus {
  TDLC_STATUS_OK = 0,
  // A required pointer argument was null.
  TDLC_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  TDLC_STATUS_INVALID_UTF8 = 2,
  // The problem document or an argument was rejected.
  TDLC_STATUS_INVALID_INPUT = 3,
  // No subgroup with the given name exists in the problem.
  TDLC_STATUS_UNKNOWN_SUBGROUP = 4,
  // The universe cannot perform the operation.
  TDLC_STATUS_UNSUPPORTED = 5,
  // The answer was not certified within the configured horizon.
  TDLC_STATUS_INCONCLUSIVE = 6,
  // An internal consistency check failed.
  TDLC_STATUS_POSTCONDITION = 7,
  // The result does not fit in the output type.
  TDLC_STATUS_OVERFLOW = 8,
  // The library panicked; the handle involved should be discarded.
  TDLC_STATUS_PANIC = 9,
} TdlcStatus;

// A parsed problem: a universe, an endomorphism and named subgroups.
typedef struct TdlcProblem TdlcProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a problem document (JSON).  On success `*out` owns a new handle.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum TdlcStatus tdlc_problem_parse(const char *json, struct TdlcProblem **out);

// Releases a problem handle.  Null is ignored.
//
// # Safety
// `p` must be null or a handle from [`tdlc_problem_parse`] not yet freed.
void tdlc_problem_free(struct TdlcProblem *p);

// Whether the problem lives in a finite group (`true`) or in Laurent
// series (`false`).
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum TdlcStatus tdlc_problem_is_finite(const struct TdlcProblem *p, bool *out);

// The scale of the problem's endomorphism, computed from the named
// subgroup (null: the whole finite group, or `F_p[[t]]`).
//
// # Safety
// `p` must be a live handle, `subgroup` null or a NUL-terminated string and
// `out` a valid pointer.
enum TdlcStatus tdlc_scale(const struct TdlcProblem *p, const char *subgroup, uint64_t *out);

// The displacement index `[U : U ∩ α⁻¹(U)]` of the named subgroup.
//
// # Safety
// As for [`tdlc_scale`].
enum TdlcStatus tdlc_displacement(const struct TdlcProblem *p, const char *subgroup, uint64_t *out);

// Whether the named subgroup is tidy for the endomorphism.
//
// # Safety
// As for [`tdlc_scale`].
enum TdlcStatus tdlc_is_tidy(const struct TdlcProblem *p, const char *subgroup, bool *out);

// Runs a built-in fixture and reports how many of its entries passed.
//
// # Safety
// `name` must be a NUL-terminated string; `passed` and `total` valid pointers.
enum TdlcStatus tdlc_fixture_run(const char *name, size_t *passed, size_t *total);

// Runs the command-line interface with `argv[0..argc]` (without the
// program name).  `*out` receives the printed output, to be released with
// [`tdlc_string_free`]; `*exit_code` the process exit code the CLI would use.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; `out` and
// `exit_code` must be valid pointers.
enum TdlcStatus tdlc_cli_run(const char *const *argv, size_t argc, char **out, int *exit_code);

// Releases a string returned by the library.  Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void tdlc_string_free(char *s);

// The message of the last failed call on this thread ("" after a success).
// Valid until the next library call on the same thread.
const char *tdlc_last_error(void);

// The library version as a static NUL-terminated string.
const char *tdlc_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TDLC_H */
