/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef BIFINITE_H
#define BIFINITE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pass as `field` to use the field declared in the presentation, or GF(1009).
 */
#define BIFINITE_FIELD_FROM_INPUT 1

/**
 * Pass as `field` to compute over the rationals.
 */
#define BIFINITE_FIELD_RATIONALS 0

/**
 * Shape of a projective or global dimension.
 */
typedef enum BifinitePdKind {
  /**
   * The zero module.
   */
  BIFINITE_PD_KIND_ZERO = 0,
  /**
   * Exactly `value`.
   */
  BIFINITE_PD_KIND_FINITE = 1,
  /**
   * Not settled below the cutoff; at least `value`.
   */
  BIFINITE_PD_KIND_AT_LEAST = 2,
} BifinitePdKind;

/**
 * Which algebra of the extension a query refers to.
 */
typedef enum BifiniteSide {
  BIFINITE_SIDE_A = 0,
  BIFINITE_SIDE_B = 1,
} BifiniteSide;

/**
 * Result code of every fallible call.
 */
typedef enum BifiniteStatus {
  BIFINITE_STATUS_OK = 0,
  BIFINITE_STATUS_NULL_ARGUMENT = 1,
  BIFINITE_STATUS_INVALID_UTF8 = 2,
  BIFINITE_STATUS_PARSE_ERROR = 3,
  BIFINITE_STATUS_FIELD_ERROR = 4,
  BIFINITE_STATUS_BUILD_ERROR = 5,
  BIFINITE_STATUS_INVALID_ARGUMENT = 6,
  BIFINITE_STATUS_PANIC = 7,
} BifiniteStatus;

/**
 * Opaque handle to a loaded extension `B ⊆ A`.
 */
typedef struct BifiniteExtension BifiniteExtension;

typedef struct BifinitePd {
  enum BifinitePdKind kind;
  size_t value;
} BifinitePd;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bifinite_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into the library on this thread.
 */
const char *bifinite_last_error(void);

/**
 * Parses `text` and builds the extension it declares.
 *
 * `field` is a prime, [`BIFINITE_FIELD_RATIONALS`] or
 * [`BIFINITE_FIELD_FROM_INPUT`]. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BifiniteStatus bifinite_extension_load(const char *text,
                                            uint64_t field,
                                            bool adjoin_unit,
                                            struct BifiniteExtension **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `ext` must come from [`bifinite_extension_load`] and not be used again.
 */
void bifinite_extension_free(struct BifiniteExtension *ext);

/**
 * Dimensions of `A` and `B` over the ground field.
 *
 * # Safety
 * All pointers must be valid.
 */
enum BifiniteStatus bifinite_extension_dims(const struct BifiniteExtension *ext,
                                            size_t *dim_a,
                                            size_t *dim_b);

/**
 * Projective dimension of `A/B` as a `B`-bimodule, plus the full report as
 * JSON in `*json_out` (skipped when `json_out` is NULL; free it with
 * [`bifinite_string_free`]).
 *
 * # Safety
 * `ext` and `n_b` must be valid; `json_out` may be NULL.
 */
enum BifiniteStatus bifinite_extension_check(const struct BifiniteExtension *ext,
                                             size_t cutoff,
                                             struct BifinitePd *n_b,
                                             char **json_out);

/**
 * Global dimension of `A` or `B`, up to `cutoff`.
 *
 * # Safety
 * `ext` and `out` must be valid.
 */
enum BifiniteStatus bifinite_extension_global_dimension(const struct BifiniteExtension *ext,
                                                        enum BifiniteSide side,
                                                        size_t cutoff,
                                                        struct BifinitePd *out);

/**
 * Runs the command-line tool in-process. `argv[0]` is the program name.
 * Returns the process exit code; stdout and stderr are stored in `*out` and
 * `*err` when those are non-NULL (free with [`bifinite_string_free`]).
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings.
 */
int32_t bifinite_cli_run(size_t argc, const char *const *argv, char **out, char **err);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void bifinite_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIFINITE_H */
