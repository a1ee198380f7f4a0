#ifndef GAMMA_LAB_H
#define GAMMA_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GlStatus {
  GL_STATUS_OK = 0,
  GL_STATUS_NULL_POINTER = 1,
  GL_STATUS_INVALID_ARGUMENT = 2,
  GL_STATUS_PARSE = 3,
  GL_STATUS_PRECONDITION = 4,
  GL_STATUS_NUMERICAL = 5,
  GL_STATUS_IO = 6,
  GL_STATUS_PANIC = 7,
} GlStatus;

/**
 * Which scalar functional [`gl_operator_measure`] computes.
 */
typedef enum GlMeasure {
  GL_MEASURE_OPERATOR_NORM = 0,
  GL_MEASURE_SPECTRAL_RADIUS = 1,
  GL_MEASURE_NUMERICAL_RADIUS = 2,
} GlMeasure;

/**
 * Opaque dense operator.
 */
typedef struct GlOperator GlOperator;

/**
 * Opaque operator tuple on either backend.
 */
typedef struct GlTuple GlTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the library.
 */
const char *gl_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gl_string_free(char *s);

/**
 * Builds a `rows × cols` operator from `rows·cols` row-major `(re, im)` pairs.
 *
 * # Safety
 * `data` must hold `2·rows·cols` doubles; `out` must be writable.
 */
enum GlStatus gl_operator_new(size_t rows,
                              size_t cols,
                              const double *data,
                              struct GlOperator **out);

/**
 * # Safety
 * `op` must be null or a live handle from [`gl_operator_new`].
 */
void gl_operator_free(struct GlOperator *op);

/**
 * `which` is a [`GlMeasure`] value.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum GlStatus gl_operator_measure(const struct GlOperator *op, uint32_t which, double *out);

/**
 * Membership of the point with elementary symmetric coordinates `s` (`n` pairs).
 *
 * # Safety
 * `s` must hold `2·n` doubles; `inside` must be writable.
 */
enum GlStatus gl_in_gamma(size_t n, const double *s, double tol, bool *inside);

/**
 * Parses a tuple file; commutation is checked at `tol`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum GlStatus gl_tuple_from_json(const char *json, double tol, struct GlTuple **out);

/**
 * # Safety
 * `t` must be null or a live handle from [`gl_tuple_from_json`].
 */
void gl_tuple_free(struct GlTuple *t);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum GlStatus gl_tuple_len(const struct GlTuple *t, size_t *out);

/**
 * Runs the classifier batteries. Writes the CLI exit code (0 or 2) and a JSON report that the
 * caller frees with [`gl_string_free`].
 *
 * # Safety
 * `t` must be a live handle; `exit_code` and `report` must be writable.
 */
enum GlStatus gl_classify(const struct GlTuple *t,
                          double tol,
                          uint64_t seed,
                          int32_t *exit_code,
                          char **report);

/**
 * Solves the fundamental equations; report as in [`gl_classify`].
 *
 * # Safety
 * As for [`gl_classify`].
 */
enum GlStatus gl_fundamental(const struct GlTuple *t,
                             double tol,
                             int32_t *exit_code,
                             char **report);

/**
 * Runs built-in scenario `which` (1 or 2); exit code 0 iff every check met its expectation.
 *
 * # Safety
 * `exit_code` and `report` must be writable.
 */
enum GlStatus gl_example(uint8_t which, int32_t *exit_code, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAMMA_LAB_H */
