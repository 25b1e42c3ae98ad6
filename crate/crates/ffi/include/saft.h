#ifndef SAFT_H
#define SAFT_H

#include <stddef.h>
#include <stdint.h>

/*
 Return codes.
 */
typedef enum {
  SAFT_STATUS_OK = 0,
  SAFT_STATUS_NULL_POINTER = 1,
  SAFT_STATUS_INVALID_PARAMS = 2,
  SAFT_STATUS_INVALID_GRID = 3,
  SAFT_STATUS_INVALID_ARGUMENT = 4,
  SAFT_STATUS_MISMATCH = 5,
  SAFT_STATUS_PANIC = 6,
  SAFT_STATUS_BUFFER_TOO_SMALL = 7,
} SaftStatus;

/*
 Kinds accepted by [`saft_params_special`].
 */
typedef enum {
  SAFT_SPECIAL_KIND_FOURIER = 0,
  /*
   Fractional Fourier transform; `value` is the angle.
   */
  SAFT_SPECIAL_KIND_FRFT = 1,
  /*
   Fresnel transform; `value` is `b`.
   */
  SAFT_SPECIAL_KIND_FRESNEL = 2,
} SaftSpecialKind;

typedef enum {
  SAFT_HEAT_METHOD_MULTIPLIER = 0,
  SAFT_HEAT_METHOD_KERNEL = 1,
} SaftHeatMethod;

/*
 Validated transform parameters.
 */
typedef struct SaftParamsHandle SaftParamsHandle;

/*
 Precomputed fast transform on a fixed grid.
 */
typedef struct SaftPlanHandle SaftPlanHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates parameters; fails unless `ad - bc = 1` and `b != 0`.

 # Safety
 `out` must be a valid pointer to writable storage for one handle pointer.
 */
SaftStatus saft_params_new(double a,
                           double b,
                           double c,
                           double d,
                           double p,
                           double q,
                           SaftParamsHandle **out);

/*
 Creates a named special case; `kind` is a [`SaftSpecialKind`] value.
 `value` is ignored for `Fourier`.

 # Safety
 `out` must be a valid pointer to writable storage for one handle pointer.
 */
SaftStatus saft_params_special(int32_t kind, double value, SaftParamsHandle **out);

/*
 Writes `a, b, c, d, p, q` into `out[0..6]`.

 # Safety
 `params` must come from this library; `out` must hold six doubles.
 */
SaftStatus saft_params_get(const SaftParamsHandle *params, double *out);

/*
 Releases parameters. Null is ignored.

 # Safety
 `params` must come from this library and not be used afterwards.
 */
void saft_params_free(SaftParamsHandle *params);

/*
 Plans the fast transform on the grid `start + n step`, `0 <= n < count`.

 # Safety
 `params` must come from this library; `out` must be writable.
 */
SaftStatus saft_plan_new(const SaftParamsHandle *params,
                         double start,
                         double step,
                         uintptr_t count,
                         SaftPlanHandle **out);

/*
 Releases a plan. Null is ignored.

 # Safety
 `plan` must come from this library and not be used afterwards.
 */
void saft_plan_free(SaftPlanHandle *plan);

/*
 Number of samples; 0 for a null plan.

 # Safety
 `plan` must be null or come from this library.
 */
uintptr_t saft_plan_len(const SaftPlanHandle *plan);

/*
 The ascending output grid `omega_j = start + j step`.

 # Safety
 `plan` must come from this library; `start` and `step` must be writable.
 */
SaftStatus saft_plan_omega_grid(const SaftPlanHandle *plan, double *start, double *step);

/*
 Forward transform of `len` interleaved samples into `output` (`out_cap` doubles).

 # Safety
 `input` must hold `2 len` doubles and `output` `out_cap` doubles.
 */
SaftStatus saft_forward(const SaftPlanHandle *plan,
                        const double *input,
                        uintptr_t len,
                        double *output,
                        uintptr_t out_cap);

/*
 Inverse of [`saft_forward`].

 # Safety
 `input` must hold `2 len` doubles and `output` `out_cap` doubles.
 */
SaftStatus saft_inverse(const SaftPlanHandle *plan,
                        const double *input,
                        uintptr_t len,
                        double *output,
                        uintptr_t out_cap);

/*
 Cyclic A-convolution of two signals on the same grid. The grid must
 contain `t = 0` as a node.

 # Safety
 `f`, `g` must hold `2 count` doubles and `output` `out_cap` doubles.
 */
SaftStatus saft_aconv_cyclic(const SaftParamsHandle *params,
                             double start,
                             double step,
                             uintptr_t count,
                             const double *f,
                             const double *g,
                             double *output,
                             uintptr_t out_cap);

/*
 Heat evolution of `g` to time `t > 0` (cyclic mode); `method` is a
 [`SaftHeatMethod`] value.

 # Safety
 `g` must hold `2 count` doubles and `output` `out_cap` doubles.
 */
SaftStatus saft_heat_evolve(const SaftParamsHandle *params,
                            double start,
                            double step,
                            uintptr_t count,
                            const double *g,
                            double t,
                            int32_t method,
                            double *output,
                            uintptr_t out_cap);

/*
 Message of the last failed call on this thread, or null. Valid until the
 next call on the same thread.
 */
const char *saft_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *saft_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAFT_H */
