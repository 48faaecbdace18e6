#ifndef SETCX_H
#define SETCX_H

/* Generated by cbindgen from setcx-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every API call.
 */
typedef enum SetcxStatus {
  /**
   * Success.
   */
  SETCX_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SETCX_STATUS_NULL_POINTER = 1,
  /**
   * Arguments failed validation (details via the last-error message).
   */
  SETCX_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The set's distance range is degenerate; calibration is impossible.
   */
  SETCX_STATUS_CALIBRATION_FAILED = 3,
  /**
   * Unexpected internal failure.
   */
  SETCX_STATUS_INTERNAL = 4,
} SetcxStatus;

/**
 * Opaque collection of binary strings (see `setcx_string_set_*`).
 */
typedef struct SetcxStringSet SetcxStringSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or an empty
 * string. The pointer stays valid until the next failing call on the
 * same thread.
 */
const char *setcx_last_error_message(void);

/**
 * The library version as a static NUL-terminated string.
 */
const char *setcx_version(void);

/**
 * Creates an empty string-set handle. Free with
 * [`setcx_string_set_free`].
 */
struct SetcxStringSet *setcx_string_set_new(void);

/**
 * Frees a string-set handle; NULL is ignored.
 *
 * # Safety
 * `set` must be a pointer returned by [`setcx_string_set_new`] that has
 * not already been freed.
 */
void setcx_string_set_free(struct SetcxStringSet *set);

/**
 * Appends a string given as a NUL-terminated sequence of '0'/'1'
 * characters.
 *
 * # Safety
 * `set` must be a live handle from [`setcx_string_set_new`]; `bits`
 * must point to a NUL-terminated byte string.
 */
enum SetcxStatus setcx_string_set_add(struct SetcxStringSet *set, const char *bits);

/**
 * Number of strings currently in the set; 0 for NULL.
 *
 * # Safety
 * `set` must be a live handle or NULL.
 */
uintptr_t setcx_string_set_len(const struct SetcxStringSet *set);

/**
 * Raw normalized compression distance between two '0'/'1' strings under
 * the default compression backend.
 *
 * # Safety
 * `x` and `y` must be NUL-terminated byte strings; `out` must be a valid
 * write target.
 */
enum SetcxStatus setcx_ncd(const char *x, const char *y, double *out);

/**
 * Set complexity of the accumulated strings (kernel `d(1−d)`, norm
 * `1/(N−1)`). With `calibrated` true, distances are calibrated from the
 * set itself using the given seed; otherwise raw distances clamped to
 * `[0, 1]` are used.
 *
 * # Safety
 * `set` must be a live handle; `out` must be a valid write target.
 */
enum SetcxStatus setcx_set_psi(const struct SetcxStringSet *set,
                               uint64_t seed,
                               bool calibrated,
                               double *out);

/**
 * Graph set complexity from a dense row-major `n × n` adjacency matrix
 * of 0/1 bytes. `mode` 0 selects the product normalization, 1 the
 * pair-max normalization.
 *
 * # Safety
 * `adjacency` must point to `n * n` readable bytes; `out` must be a valid
 * write target.
 */
enum SetcxStatus setcx_graph_psi(const uint8_t *adjacency, uintptr_t n, uint32_t mode, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SETCX_H */
