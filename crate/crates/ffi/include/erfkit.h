#ifndef ERFKIT_H
#define ERFKIT_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum ErfkitStatus {
  ERFKIT_STATUS_OK = 0,
  ERFKIT_STATUS_NULL_ARGUMENT = 1,
  ERFKIT_STATUS_INVALID_UTF8 = 2,
  ERFKIT_STATUS_USAGE = 3,
  ERFKIT_STATUS_DOMAIN = 4,
  ERFKIT_STATUS_RANGE = 5,
  ERFKIT_STATUS_NUMERIC = 6,
  ERFKIT_STATUS_PARSE = 7,
  ERFKIT_STATUS_BUFFER_TOO_SMALL = 8,
  ERFKIT_STATUS_PANIC = 9,
  ERFKIT_STATUS_INTERNAL = 10,
} ErfkitStatus;

/**
 * Opaque approximant handle.
 */
typedef struct ErfkitApproximant ErfkitApproximant;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static NUL-terminated string.
 */
const char *erfkit_version(void);

/**
 * Message for the last failure on this thread, or null. Valid until the next call.
 */
const char *erfkit_last_error(void);

/**
 * Builds an approximant from a JSON descriptor such as
 * `{"family":"spline","order":4,"digits":34,"transition":"auto"}`.
 * `x_max` bounds the knot table for the grid family; pass 0 for the default.
 *
 * # Safety
 * `descriptor_json` must be a NUL-terminated string, `out` a valid pointer.
 */
enum ErfkitStatus erfkit_approximant_new(const char *descriptor_json,
                                         double x_max,
                                         struct ErfkitApproximant **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from `erfkit_approximant_new` and not be used afterwards.
 */
void erfkit_approximant_free(struct ErfkitApproximant *h);

/**
 * Evaluates at a double, result rounded to double.
 *
 * # Safety
 * `h` must be a live handle, `out` a valid pointer.
 */
enum ErfkitStatus erfkit_eval(const struct ErfkitApproximant *h, double x, double *out);

/**
 * Evaluates at a decimal string, writing the value at the handle's working digits.
 *
 * # Safety
 * `h` live, `x` NUL-terminated, `buf` at least `len` bytes or null.
 */
enum ErfkitStatus erfkit_eval_str(const struct ErfkitApproximant *h,
                                  const char *x,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

/**
 * JSON document of the closed form (same as `erfkit gen`).
 *
 * # Safety
 * `h` live, `buf` at least `len` bytes or null.
 */
enum ErfkitStatus erfkit_approximant_document(const struct ErfkitApproximant *h,
                                              char *buf,
                                              size_t len,
                                              size_t *needed);

/**
 * Maximum relative error against the reference on x_i = a + i(b-a)/points, i = 1..points.
 *
 * # Safety
 * `h` live; `re_b` and `argmax` valid pointers (argmax may be null).
 */
enum ErfkitStatus erfkit_sweep(const struct ErfkitApproximant *h,
                               double a,
                               double b,
                               size_t points,
                               double *re_b,
                               double *argmax);

/**
 * Reference erf at `digits` significant digits.
 *
 * # Safety
 * `x` NUL-terminated, `buf` at least `len` bytes or null.
 */
enum ErfkitStatus erfkit_erf_reference(const char *x,
                                       int digits,
                                       char *buf,
                                       size_t len,
                                       size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERFKIT_H */
