/* Forward and inverse transform of a Gaussian through the C API. */
#include <math.h>
#include <stdio.h>

#include "saft.h"

#define N 256

int main(void) {
  SaftParamsHandle *params = NULL;
  SaftPlanHandle *plan = NULL;
  double in[2 * N], spec[2 * N], back[2 * N];
  double start = -8.0, step = 16.0 / N;

  if (saft_params_special(SAFT_SPECIAL_KIND_FRFT, 0.7853981633974483, &params) != SAFT_STATUS_OK ||
      saft_plan_new(params, start, step, N, &plan) != SAFT_STATUS_OK) {
    fprintf(stderr, "setup failed: %s\n", saft_last_error_message());
    return 1;
  }
  for (int n = 0; n < N; n++) {
    double t = start + n * step;
    in[2 * n] = exp(-M_PI * t * t);
    in[2 * n + 1] = 0.0;
  }
  if (saft_forward(plan, in, N, spec, 2 * N) != SAFT_STATUS_OK ||
      saft_inverse(plan, spec, N, back, 2 * N) != SAFT_STATUS_OK) {
    fprintf(stderr, "transform failed: %s\n", saft_last_error_message());
    return 1;
  }
  double err = 0.0, peak = 0.0;
  for (int k = 0; k < 2 * N; k++) {
    err = fmax(err, fabs(back[k] - in[k]));
  }
  for (int k = 0; k < N; k++) {
    peak = fmax(peak, hypot(spec[2 * k], spec[2 * k + 1]));
  }
  printf("saft %s roundtrip_err=%.3e peak=%.12f\n", saft_version(), err, peak);
  saft_plan_free(plan);
  saft_params_free(params);
  /* The frft of e^{-pi t^2} has unit modulus at its peak. */
  return (err < 1e-12 && fabs(peak - 1.0) < 1e-9) ? 0 : 1;
}
