#ifndef LIMITPER_H
#define LIMITPER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LpStatus {
  LP_STATUS_OK = 0,
  LP_STATUS_NULL_POINTER = 1,
  LP_STATUS_INVALID_ARGUMENT = 2,
  LP_STATUS_PARSE = 3,
  LP_STATUS_ILLEGAL_SEED = 4,
  LP_STATUS_OUT_OF_RANGE = 5,
  LP_STATUS_PANIC = 6,
} LpStatus;

/**
 * A validated substitution system.
 */
typedef struct LpSystem LpSystem;

/**
 * A rectangular patch of labels.
 */
typedef struct LpWindow LpWindow;

typedef struct LpComplex {
  double re;
  double im;
} LpComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *lp_last_error_message(void);

/**
 * Looks up `period-doubling` or `chair`.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` writable.
 */
enum LpStatus lp_system_builtin(const char *name, struct LpSystem **out);

/**
 * Parses rule-file text.
 *
 * # Safety
 * `text` must be a nul-terminated UTF-8 string and `out` writable.
 */
enum LpStatus lp_system_parse(const char *text, struct LpSystem **out);

/**
 * # Safety
 * `system` must come from this library and not be freed twice. NULL is ignored.
 */
void lp_system_free(struct LpSystem *system);

/**
 * # Safety
 * `system` must be a live handle.
 */
size_t lp_system_alphabet_size(const struct LpSystem *system);

/**
 * # Safety
 * `system` must be a live handle.
 */
size_t lp_system_dim(const struct LpSystem *system);

/**
 * # Safety
 * `system` must be a live handle.
 */
size_t lp_system_factor(const struct LpSystem *system);

/**
 * Iterates a legal seed `iterations` times under the smallest power of the
 * rule that fixes it.
 *
 * `seed` holds `2^dim` labels, top row first in 2D; NULL picks the first
 * legal seed.
 *
 * # Safety
 * `system` must be a live handle, `seed` NULL or `seed_len` readable bytes,
 * and `out` writable.
 */
enum LpStatus lp_fixed_point_window(const struct LpSystem *system,
                                    const uint8_t *seed,
                                    size_t seed_len,
                                    uint32_t iterations,
                                    struct LpWindow **out);

/**
 * # Safety
 * `window` must come from this library and not be freed twice. NULL is ignored.
 */
void lp_window_free(struct LpWindow *window);

/**
 * # Safety
 * `window` must be a live handle.
 */
size_t lp_window_dim(const struct LpWindow *window);

/**
 * Number of cells.
 *
 * # Safety
 * `window` must be a live handle.
 */
size_t lp_window_len(const struct LpWindow *window);

/**
 * Lowest coordinate and cell count along `axis`.
 *
 * # Safety
 * `window` must be a live handle; `origin` and `extent` writable.
 */
enum LpStatus lp_window_axis(const struct LpWindow *window,
                             size_t axis,
                             int64_t *origin,
                             size_t *extent);

/**
 * Copies all labels, x fastest and lowest row first, into `buf`.
 *
 * # Safety
 * `window` must be a live handle and `buf` hold `len` writable bytes.
 */
enum LpStatus lp_window_labels(const struct LpWindow *window, uint8_t *buf, size_t len);

/**
 * Label at `(x, y)`; `y` is ignored in 1D.
 *
 * # Safety
 * `window` must be a live handle and `label` writable.
 */
enum LpStatus lp_window_get(const struct LpWindow *window, int64_t x, int64_t y, uint8_t *label);

/**
 * Period doubling amplitudes `A`, `B` at `num / 2^exp`.
 *
 * # Safety
 * `a` and `b` must be writable.
 */
enum LpStatus lp_pd_amplitudes(int64_t num, uint32_t exp, struct LpComplex *a, struct LpComplex *b);

/**
 * # Safety
 * `out` must be writable.
 */
enum LpStatus lp_pd_intensity(int64_t num,
                              uint32_t exp,
                              struct LpComplex alpha,
                              struct LpComplex beta,
                              double *out);

/**
 * Autocorrelation coefficient `η(z)` for weights `alpha` on `a`, `beta` on `b`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LpStatus lp_pd_eta(int64_t z,
                        struct LpComplex alpha,
                        struct LpComplex beta,
                        struct LpComplex *out);

/**
 * Chair colour of the cell with lower left corner `(x, y)`.
 */
uint8_t lp_chair_label(int64_t x, int64_t y);

/**
 * The four chair amplitudes at `(m, n) / 2^s`, written to `out[0..4]`.
 *
 * # Safety
 * `out` must hold four writable values.
 */
enum LpStatus lp_chair_amplitudes(int64_t m, int64_t n, uint32_t s, struct LpComplex *out);

/**
 * # Safety
 * `weights` must hold four readable values and `out` be writable.
 */
enum LpStatus lp_chair_intensity(int64_t m,
                                 int64_t n,
                                 uint32_t s,
                                 const struct LpComplex *weights,
                                 double *out);

/**
 * Rewrites `num / 2^exp` in normal form.
 *
 * # Safety
 * `num` and `exp` must be readable and writable.
 */
enum LpStatus lp_dyadic_normalize(int64_t *num, uint32_t *exp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIMITPER_H */
