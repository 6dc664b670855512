#ifndef PLEMELJ_H
#define PLEMELJ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum PlemeljStatus {
  PLEMELJ_STATUS_OK = 0,
  PLEMELJ_STATUS_NULL_POINTER = 1,
  PLEMELJ_STATUS_INVALID_ARGUMENT = 2,
  PLEMELJ_STATUS_COMPUTE_ERROR = 3,
  PLEMELJ_STATUS_PANIC = 4,
} PlemeljStatus;

// Opaque curve handle.
typedef struct PlemeljCurve PlemeljCurve;

// Opaque density handle.
typedef struct PlemeljDensity PlemeljDensity;

// A complex number crossing the ABI.
typedef struct PlemeljComplex {
  double re;
  double im;
} PlemeljComplex;

// Plemelj boundary values at one curve point.
typedef struct PlemeljBoundary {
  struct PlemeljComplex point;
  struct PlemeljComplex phi_plus;
  struct PlemeljComplex phi_minus;
  struct PlemeljComplex pv_part;
  struct PlemeljComplex density_value;
  double pv_error_estimate;
  bool pv_converged;
} PlemeljBoundary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message for this thread into `buf` (NUL-terminated,
// truncated to `len` bytes). Returns the full message length in bytes,
// excluding the terminator; 0 means no pending error.
//
// # Safety
// `buf` must point to `len` writable bytes, or be NULL (then only the
// required length is returned).
uintptr_t plemelj_last_error_message(char *buf, uintptr_t len);

// Create a builtin curve: `segment`, `circle`, `arc`, or `parabola-graph`.
//
// # Safety
// `name` must be a NUL-terminated string, `params` must point to
// `n_params` doubles (or be NULL when `n_params` is 0), and `out` must be
// a valid pointer. The handle must be released with [`plemelj_curve_free`].
enum PlemeljStatus plemelj_curve_builtin(const char *name,
                                         const double *params,
                                         uintptr_t n_params,
                                         struct PlemeljCurve **out);

// Build a curve through points (re[i], im[i]) by spline interpolation and
// arc-length reparameterization.
//
// # Safety
// `re` and `im` must each point to `n` doubles; `out` must be valid. The
// handle must be released with [`plemelj_curve_free`].
enum PlemeljStatus plemelj_curve_from_points(const double *re,
                                             const double *im,
                                             uintptr_t n,
                                             bool closed,
                                             struct PlemeljCurve **out);

// Release a curve handle. NULL is ignored.
//
// # Safety
// `ptr` must be a handle from this library not yet freed.
void plemelj_curve_free(struct PlemeljCurve *ptr);

// Arc length of the curve.
//
// # Safety
// `curve` must be a live handle; `out` must be valid.
enum PlemeljStatus plemelj_curve_length(const struct PlemeljCurve *curve, double *out);

// Create a builtin density: `constant`, `linear`, `holder-power`,
// `dini-log`, or `step`.
//
// # Safety
// As [`plemelj_curve_builtin`]; release with [`plemelj_density_free`].
enum PlemeljStatus plemelj_density_builtin(const char *name,
                                           const double *params,
                                           uintptr_t n_params,
                                           struct PlemeljDensity **out);

// Tabulated density over strictly increasing parameters.
//
// # Safety
// `tau`, `re`, `im` must each point to `n` doubles; `out` must be valid.
enum PlemeljStatus plemelj_density_from_table(const double *tau,
                                              const double *re,
                                              const double *im,
                                              uintptr_t n,
                                              struct PlemeljDensity **out);

// Release a density handle. NULL is ignored.
//
// # Safety
// `ptr` must be a handle from this library not yet freed.
void plemelj_density_free(struct PlemeljDensity *ptr);

// P.V. int_C phi(s)/(s - psi(tau0)) ds with default settings.
// `out_converged` may be NULL when the flag is not needed.
//
// # Safety
// Handles must be live; `out_value` (and `out_error_estimate`,
// `out_converged` when non-NULL) must be writable.
enum PlemeljStatus plemelj_pv_curve(const struct PlemeljCurve *curve,
                                    const struct PlemeljDensity *density,
                                    double tau0,
                                    struct PlemeljComplex *out_value,
                                    double *out_error_estimate,
                                    bool *out_converged);

// Cauchy transform Phi(z) for z off the curve.
//
// # Safety
// Handles must be live; `out` must be writable.
enum PlemeljStatus plemelj_cauchy_transform(const struct PlemeljCurve *curve,
                                            const struct PlemeljDensity *density,
                                            struct PlemeljComplex z,
                                            struct PlemeljComplex *out);

// Plemelj boundary values at an interior curve parameter.
//
// # Safety
// Handles must be live; `out` must be writable.
enum PlemeljStatus plemelj_boundary_values(const struct PlemeljCurve *curve,
                                           const struct PlemeljDensity *density,
                                           double tau0,
                                           struct PlemeljBoundary *out);

// Jump and sum residuals from two independent convergence runs of depth
// `depth` (radii 2^-n). `out_sum_residual` may be NULL.
//
// # Safety
// Handles must be live; `out_jump_residual` must be writable.
enum PlemeljStatus plemelj_verify_jump(const struct PlemeljCurve *curve,
                                       const struct PlemeljDensity *density,
                                       double tau0,
                                       uint32_t depth,
                                       double *out_jump_residual,
                                       double *out_sum_residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLEMELJ_H */
