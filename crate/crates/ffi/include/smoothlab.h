#ifndef SMOOTHLAB_H
#define SMOOTHLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_UTF8 = 2,
  SL_STATUS_INVALID_GRID = 3,
  SL_STATUS_SHAPE_MISMATCH = 4,
  SL_STATUS_DESCRIPTOR = 5,
  SL_STATUS_DOMAIN = 6,
  SL_STATUS_NUMERICAL = 7,
  SL_STATUS_CONFIG = 8,
  SL_STATUS_UNKNOWN_FUNCTION = 9,
  SL_STATUS_IO = 10,
  SL_STATUS_BUFFER_TOO_SMALL = 11,
  SL_STATUS_PANIC = 12,
} SlStatus;

/**
 * Sampled function on the periodic grid.
 */
typedef struct SlGridFunction SlGridFunction;

/**
 * Parsed summation method.
 */
typedef struct SlMultiplier SlMultiplier;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sl_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sl_version(void);

/**
 * Builds a grid function from `len = n^dim` real samples in row-major order.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum SlStatus sl_grid_from_real(size_t dim,
                                size_t n,
                                const double *samples,
                                size_t len,
                                struct SlGridFunction **out);

/**
 * Samples a named corpus function (see `smoothlab corpus list`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum SlStatus sl_grid_from_corpus(const char *name,
                                  size_t dim,
                                  size_t n,
                                  uint64_t seed,
                                  struct SlGridFunction **out);

/**
 * # Safety
 * `g` must be null or a handle from this library that was not freed yet.
 */
void sl_grid_free(struct SlGridFunction *g);

/**
 * Number of samples, n^dim; 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t sl_grid_len(const struct SlGridFunction *g);

/**
 * Copies the real parts of the samples into `out[0..len]`.
 *
 * # Safety
 * `g` must be a live handle; `out` must point to `len` writable doubles.
 */
enum SlStatus sl_grid_real_parts(const struct SlGridFunction *g, double *out, size_t len);

/**
 * Normalized L_p norm; pass `INFINITY` for p = ∞.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SlStatus sl_lp_norm(const struct SlGridFunction *g, double p, double *out);

/**
 * Classical modulus of order `r` at step `h`, over the unit segment in d = 1
 * and the unit ball otherwise.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SlStatus sl_classical_modulus(const struct SlGridFunction *g,
                                   uint32_t r,
                                   double h,
                                   double p,
                                   double *out);

/**
 * Parses a method descriptor such as `fejer`, `riesz:2:1` or `trigub:3`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum SlStatus sl_multiplier_parse(const char *descriptor, struct SlMultiplier **out);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
void sl_multiplier_free(struct SlMultiplier *m);

/**
 * Value of the generator at `x[0..dim]`, split into real and imaginary parts.
 *
 * # Safety
 * `m` must be a live handle, `x` must point to `dim` doubles, `re` and `im` must be writable.
 */
enum SlStatus sl_multiplier_eval(const struct SlMultiplier *m,
                                 const double *x,
                                 size_t dim,
                                 double *re,
                                 double *im);

/**
 * ‖f − Φ_ε f‖_p.
 *
 * # Safety
 * `g` and `m` must be live handles; `out` must be writable.
 */
enum SlStatus sl_approximation_error(const struct SlGridFunction *g,
                                     const struct SlMultiplier *m,
                                     double eps,
                                     double p,
                                     double *out);

/**
 * Exact L₂ K-functional K(t; f) for an operator such as `derivative:1`,
 * `laplacian:2`, `axis:1.5`, `max_degree` or `radial:1`.
 *
 * # Safety
 * `g` must be a live handle, `op` a NUL-terminated string, `out` writable.
 */
enum SlStatus sl_k_exact_l2(const struct SlGridFunction *g, const char *op, double t, double *out);

/**
 * Runs an experiment from a JSON config and returns its rows as CSV in a
 * string released with [`sl_string_free`]. `failed_rows` (optional) receives
 * the number of error or flagged rows.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out` must be writable;
 * `failed_rows` may be null.
 */
enum SlStatus sl_run_experiment_csv(const char *config_json, char **out, size_t *failed_rows);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void sl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMOOTHLAB_H */
