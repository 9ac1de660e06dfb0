#ifndef HPZ_H
#define HPZ_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Coefficient family selector.
 */
typedef enum HpzMode {
  HPZ_MODE_EXACT = 0,
  HPZ_MODE_WEAK = 1,
} HpzMode;

/**
 * Result codes.
 */
typedef enum HpzStatus {
  HPZ_STATUS_OK = 0,
  HPZ_STATUS_INVALID_PARAMETER = 1,
  HPZ_STATUS_DEGENERATE_ROOTS = 2,
  HPZ_STATUS_CONDITIONING = 3,
  HPZ_STATUS_DOMAIN = 4,
  HPZ_STATUS_DIVERGENT = 5,
  HPZ_STATUS_POLE_COLLISION = 6,
  HPZ_STATUS_NUMERICAL = 7,
  HPZ_STATUS_INCONSISTENT = 8,
  HPZ_STATUS_USAGE = 9,
  HPZ_STATUS_NULL_POINTER = 10,
  HPZ_STATUS_PANIC = 11,
} HpzStatus;

/**
 * Model variant selector.
 */
typedef enum HpzVariant {
  HPZ_VARIANT_ORIGINAL = 0,
  HPZ_VARIANT_CALDEIRA_LEGGETT = 1,
  HPZ_VARIANT_WEAK_SHIFTED = 2,
} HpzVariant;

/**
 * Opaque evaluation context for one parameter point.
 */
typedef struct HpzContext HpzContext;

/**
 * A, B, C, D at time t (t is infinite for asymptotic values).
 */
typedef struct HpzCoefficients {
  double t;
  double a;
  double b;
  double c;
  double d;
} HpzCoefficients;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a context. On success `*out` owns a context to be released with
 * [`hpz_context_free`].
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum HpzStatus hpz_context_new(double mass,
                               double omega,
                               double omega_c,
                               double gamma,
                               double hbar,
                               enum HpzVariant variant_id,
                               struct HpzContext **out);

/**
 * Release a context. Passing null is a no-op.
 *
 * # Safety
 * `ctx` must be null or a pointer obtained from [`hpz_context_new`] that
 * has not been freed yet.
 */
void hpz_context_free(struct HpzContext *ctx);

/**
 * Coefficients at time t in the context's units.
 *
 * # Safety
 * `ctx` must be a live context and `out` writable.
 */
enum HpzStatus hpz_coefficients(const struct HpzContext *ctx,
                                double t,
                                enum HpzMode mode_id,
                                struct HpzCoefficients *out);

/**
 * t → ∞ values.
 *
 * # Safety
 * `ctx` must be a live context and `out` writable.
 */
enum HpzStatus hpz_asymptotics(const struct HpzContext *ctx,
                               enum HpzMode mode_id,
                               struct HpzCoefficients *out);

/**
 * The three roots of the characteristic cubic, real and imaginary parts.
 *
 * # Safety
 * `ctx` must be a live context; `re` and `im` must each point to three writable doubles.
 */
enum HpzStatus hpz_roots(const struct HpzContext *ctx, double *re, double *im);

/**
 * Observable frequency squared at time t (may be negative).
 *
 * # Safety
 * `ctx` must be a live context and `out` writable.
 */
enum HpzStatus hpz_omega_obs2(const struct HpzContext *ctx, double t, double *out);

/**
 * Stationary positivity parameter Q (exact) or Q_w (weak).
 *
 * # Safety
 * `ctx` must be a live context and `out` writable.
 */
enum HpzStatus hpz_stationary_q(const struct HpzContext *ctx, enum HpzMode mode_id, double *out);

/**
 * Critical coupling of a variant.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpzStatus hpz_gamma_critical(double omega,
                                  double omega_c,
                                  enum HpzVariant variant_id,
                                  double *out);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *hpz_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hpz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HPZ_H */
