#ifndef ZEROCOUNT_H
#define ZEROCOUNT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZcStatus {
  ZC_STATUS_OK = 0,
  ZC_STATUS_NULL_POINTER = 1,
  ZC_STATUS_INVALID_STRING = 2,
  ZC_STATUS_DOMAIN = 3,
  ZC_STATUS_ACCURACY = 4,
  ZC_STATUS_POLE = 5,
  ZC_STATUS_RANGE = 6,
  ZC_STATUS_CONSTRAINT = 7,
  ZC_STATUS_QUADRATURE = 8,
  ZC_STATUS_NO_CROSSING = 9,
  ZC_STATUS_INFEASIBLE = 10,
  ZC_STATUS_COMPLETENESS = 11,
  ZC_STATUS_COVERAGE = 12,
  ZC_STATUS_PARSE = 13,
  ZC_STATUS_MONOTONICITY = 14,
  ZC_STATUS_INDEX = 15,
  ZC_STATUS_CONFIG = 16,
  ZC_STATUS_IO = 17,
  ZC_STATUS_PANIC = 18,
} ZcStatus;

/**
 * Published parameter set with a chosen (c, r, eta).
 */
typedef struct ZcParams ZcParams;

/**
 * Strictly increasing list of zero ordinates.
 */
typedef struct ZcZeroList ZcZeroList;

typedef struct ZcConstantSet {
  double c1;
  double c2;
  double c2p;
  double c3;
  double c3p;
  double c3t;
  double c3pt;
} ZcConstantSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null. Release it with
 * `zc_string_free`.
 */
char *zc_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void zc_string_free(char *s);

/**
 * Creates the published instantiation (n = 5, J1 = 64, J2 = 39,
 * T0 = 30610046000) at (c, r, eta). Fails with `Constraint` if the point is
 * infeasible; nothing is allocated in that case.
 *
 * # Safety
 * `out_params` must be a valid pointer to writable storage for one handle pointer.
 */
enum ZcStatus zc_params_new(double c, double r, double eta, struct ZcParams **out_params);

/**
 * # Safety
 * `p` must be null or a handle from `zc_params_new`, not yet freed.
 */
void zc_params_free(struct ZcParams *p);

/**
 * Assembles the seven constants at quadrature tolerance `abs_tol`.
 *
 * # Safety
 * `p` must be a live handle and `out_set` a valid pointer.
 */
enum ZcStatus zc_constants(const struct ZcParams *p, double abs_tol, struct ZcConstantSet *out_set);

/**
 * The same seven values rounded up at the fifth decimal.
 */
struct ZcConstantSet zc_constants_round_up(struct ZcConstantSet set);

/**
 * Riemann zeta on the real axis, sigma > 1.
 *
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum ZcStatus zc_zeta_real(double sigma, double *out_value);

/**
 * Hardy's Z(t), t >= 10.
 *
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum ZcStatus zc_hardy_z(double t, double *out_value);

/**
 * Riemann-Siegel theta(t).
 *
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum ZcStatus zc_theta(double t, double *out_value);

/**
 * g(T), the Stirling remainder in the counting formula.
 *
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum ZcStatus zc_g(double t, double *out_value);

/**
 * Computes and verifies all zeros up to `t_max` (15 <= t_max <= 1e6).
 *
 * # Safety
 * `out_list` must be a valid pointer.
 */
enum ZcStatus zc_zeros_find(double t_max, struct ZcZeroList **out_list);

/**
 * Reads a zero file (one ordinate per line, '#' comments).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out_list` a valid pointer.
 */
enum ZcStatus zc_zeros_ingest(const char *path, struct ZcZeroList **out_list);

/**
 * # Safety
 * `z` must be a live handle and `path` a NUL-terminated string.
 */
enum ZcStatus zc_zeros_write(const struct ZcZeroList *z, const char *path);

/**
 * # Safety
 * `z` must be null or a live handle.
 */
size_t zc_zeros_len(const struct ZcZeroList *z);

/**
 * # Safety
 * `z` must be null or a live handle.
 */
double zc_zeros_coverage(const struct ZcZeroList *z);

/**
 * The n-th ordinate, 1-based.
 *
 * # Safety
 * `z` must be a live handle and `out_value` a valid pointer.
 */
enum ZcStatus zc_zeros_get(const struct ZcZeroList *z, size_t n, double *out_value);

/**
 * # Safety
 * `z` must be a live handle and `out_count` a valid pointer.
 */
enum ZcStatus zc_n_exact(const struct ZcZeroList *z, double t, size_t *out_count);

/**
 * # Safety
 * `z` must be a live handle and `out_value` a valid pointer.
 */
enum ZcStatus zc_s_exact(const struct ZcZeroList *z, double t, double *out_value);

/**
 * # Safety
 * `z` must be null or a handle from this library, not yet freed.
 */
void zc_zeros_free(struct ZcZeroList *z);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ZEROCOUNT_H */
