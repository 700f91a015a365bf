#ifndef SCATTER1D_H
#define SCATTER1D_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/*
 Status codes. Stable; new codes are only ever appended.
 */
typedef enum S1dStatus {
  S1D_STATUS_OK = 0,
  S1D_STATUS_NULL_POINTER = 1,
  S1D_STATUS_INVALID_ARGUMENT = 2,
  /*
   Malformed potential configuration.
   */
  S1D_STATUS_CONFIG = 3,
  /*
   Integration, quadrature or series failure.
   */
  S1D_STATUS_COMPUTE = 4,
  /*
   κ outside the analyticity strip of the potential's tails.
   */
  S1D_STATUS_TAIL_LIMITED = 5,
  /*
   κ at a pole or too close to κ = 0.
   */
  S1D_STATUS_SINGULAR = 6,
  /*
   Contour scan failed.
   */
  S1D_STATUS_SCAN = 7,
  /*
   No closed form for this potential.
   */
  S1D_STATUS_NO_ORACLE = 8,
  S1D_STATUS_PANIC = 9,
} S1dStatus;

/*
 Opaque potential handle.
 */
typedef struct S1dPotential S1dPotential;

/*
 Opaque list of zeros from a scan.
 */
typedef struct S1dZeroList S1dZeroList;

/*
 Solver tolerances; pass NULL for defaults.
 */
typedef struct S1dOptions {
  double rel_tol;
  double abs_tol;
  /*
   Support cutoff relative to max V.
   */
  double support_eps;
  double max_step;
} S1dOptions;

typedef struct S1dComplex {
  double re;
  double im;
} S1dComplex;

/*
 Amplitudes at one momentum: α, β and a = 1 − α/2iκ, b = β/2iκ.
 */
typedef struct S1dJost {
  struct S1dComplex kappa;
  struct S1dComplex alpha;
  struct S1dComplex beta;
  struct S1dComplex a;
  struct S1dComplex b;
} S1dJost;

typedef struct S1dZero {
  struct S1dComplex location;
  int32_t multiplicity;
  double residual;
  /*
   0 if the cell hit the depth limit before isolating the zero.
   */
  int32_t resolved;
} S1dZero;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. Valid until the
 next call into this library from the same thread.
 */
const char *s1d_last_error(void);

/*
 Library version, static string.
 */
const char *s1d_version(void);

/*
 Default solver options.
 */
struct S1dOptions s1d_options_default(void);

/*
 Build a potential from a JSON config. On success `*out` owns a handle.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum S1dStatus s1d_potential_from_json(const char *json, struct S1dPotential **out);

/*
 Build a named potential from keyed parameters, e.g. `"square"` with
 keys `{"V0", "x0"}`.

 Keys: square, exponential, poschl_teller, gaussian: `V0`, `x0`;
 delta: `v0`, optional `position`; double: `V0`, `x0`, `d`; free: none.

 # Safety
 `name` and each of `keys[0..n]` must be NUL-terminated; `values` must
 hold `n` doubles (both arrays may be NULL when `n` is 0); `out` writable.
 */
enum S1dStatus s1d_potential_builtin(const char *name,
                                     const char *const *keys,
                                     const double *values,
                                     size_t n,
                                     struct S1dPotential **out);

/*
 Release a potential. NULL is a no-op.

 # Safety
 `p` must come from this library and not be used afterwards.
 */
void s1d_potential_free(struct S1dPotential *p);

/*
 V(x); spikes (delta parts) are not included.

 # Safety
 `p` must be a live handle; `out` writable.
 */
enum S1dStatus s1d_potential_eval(const struct S1dPotential *p, double x, double *out);

/*
 Amplitudes by direct integration. `opts` may be NULL.

 # Safety
 `p` must be a live handle; `opts` NULL or valid; `out` writable.
 */
enum S1dStatus s1d_amplitudes(const struct S1dPotential *p,
                              struct S1dComplex kappa,
                              const struct S1dOptions *opts,
                              struct S1dJost *out);

/*
 Closed-form amplitudes; `NoOracle` unless the potential is a centered
 square, exponential, Pöschl–Teller or delta barrier.

 # Safety
 `p` must be a live handle; `out` writable.
 */
enum S1dStatus s1d_oracle(const struct S1dPotential *p,
                          struct S1dComplex kappa,
                          struct S1dJost *out);

/*
 T = 1/|a|², R = |b/a|²; real κ only.

 # Safety
 `j` must be valid; `t`, `r` writable.
 */
enum S1dStatus s1d_transmission_reflection(const struct S1dJost *j, double *t, double *r);

/*
 Coefficients of two barriers displaced by `d1` and `d2` (`d1 < d2`,
 non-overlapping), from those of the centered barriers at the same κ.

 # Safety
 `j1`, `j2` valid; `out` writable.
 */
enum S1dStatus s1d_compose(const struct S1dJost *j1,
                           double d1,
                           const struct S1dJost *j2,
                           double d2,
                           struct S1dJost *out);

/*
 Zeros of a(κ) in the rectangle. With `use_oracle` non-zero the closed
 form is used when one exists (and may reach below the tail strip).

 # Safety
 `p` must be a live handle; `out` writable.
 */
enum S1dStatus s1d_scan(const struct S1dPotential *p,
                        double re_min,
                        double re_max,
                        double im_min,
                        double im_max,
                        int32_t use_oracle,
                        struct S1dZeroList **out);

/*
 Number of zeros in the list (0 for NULL).

 # Safety
 `l` NULL or a live list.
 */
size_t s1d_zero_list_len(const struct S1dZeroList *l);

/*
 Total winding of a around the scanned rectangle (0 for NULL).

 # Safety
 `l` NULL or a live list.
 */
int64_t s1d_zero_list_winding(const struct S1dZeroList *l);

/*
 Zero `i`, ordered by imaginary then real part.

 # Safety
 `l` a live list; `out` writable.
 */
enum S1dStatus s1d_zero_list_get(const struct S1dZeroList *l, size_t i, struct S1dZero *out);

/*
 Release a zero list. NULL is a no-op.

 # Safety
 `l` must come from [`s1d_scan`] and not be used afterwards.
 */
void s1d_zero_list_free(struct S1dZeroList *l);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCATTER1D_H */
