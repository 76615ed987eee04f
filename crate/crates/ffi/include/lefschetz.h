#ifndef LEFSCHETZ_H
#define LEFSCHETZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum LfStatus {
  LF_STATUS_OK = 0,
  LF_STATUS_NULL_POINTER = 1,
  LF_STATUS_INVALID_UTF8 = 2,
  LF_STATUS_PARSE_ERROR = 3,
  /**
   * The operation needs a closed word over the sphere, or calibration failed.
   */
  LF_STATUS_PRECONDITION = 4,
  LF_STATUS_NOT_FOUND = 5,
  LF_STATUS_INVALID_ARGUMENT = 6,
  LF_STATUS_PANIC = 7,
} LfStatus;

typedef enum LfClosure {
  LF_CLOSURE_CLOSED = 0,
  LF_CLOSURE_CLOSED_UP_TO_COMMUTATORS = 1,
  LF_CLOSURE_UNVERIFIED = 2,
  LF_CLOSURE_VIOLATED = 3,
} LfClosure;

typedef enum LfFormat {
  LF_FORMAT_DSL = 0,
  LF_FORMAT_JSON = 1,
} LfFormat;

/**
 * Opaque handle to a parsed factorization.
 */
typedef struct LfFactorization LfFactorization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a DSL or JSON document into a new handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum LfStatus lf_parse(const char *text, struct LfFactorization **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must come from [`lf_parse`] and not be used afterwards.
 */
void lf_factorization_free(struct LfFactorization *f);

/**
 * Singular fiber counts `l = n + s`.
 *
 * # Safety
 * `f` must be a live handle; the outputs must be valid pointers.
 */
enum LfStatus lf_counts(const struct LfFactorization *f, size_t *l, size_t *n, size_t *s);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum LfStatus lf_closure(const struct LfFactorization *f, enum LfClosure *out);

/**
 * Signature of the total space; needs a closed word over the sphere.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum LfStatus lf_signature(const struct LfFactorization *f, int64_t *out);

/**
 * The invariant report as JSON; free the result with [`lf_string_free`].
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum LfStatus lf_invariants_json(const struct LfFactorization *f, char **out);

/**
 * Runs the checks (`suite` may be null for all) with the handle's flags.
 * `any_failed` is set to 1 when an applicable non-informational check fails.
 *
 * # Safety
 * `f` must be a live handle; `suite` null or a nul-terminated string;
 * `out` and `any_failed` valid pointers.
 */
enum LfStatus lf_check_json(const struct LfFactorization *f,
                            const char *suite,
                            char **out,
                            int *any_failed);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum LfStatus lf_serialize(const struct LfFactorization *f, enum LfFormat fmt, char **out);

/**
 * The embedded document of a catalog entry, byte for byte.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum LfStatus lf_catalog_export(const char *name, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void lf_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *lf_last_error(void);

/**
 * Library version, statically allocated.
 */
const char *lf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEFSCHETZ_H */
