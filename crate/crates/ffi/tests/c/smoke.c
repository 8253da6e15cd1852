#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include "roughdep.h"

#define CHECK(expr)                                                        \
  do {                                                                     \
    RdStatus s_ = (expr);                                                  \
    if (s_ != RD_STATUS_OK) {                                              \
      fprintf(stderr, "%s -> %d: %s\n", #expr, (int)s_,                    \
              rd_last_error_message());                                    \
      return 1;                                                            \
    }                                                                      \
  } while (0)

int main(void) {
  const size_t k = 4;
  RdSolver *solver = NULL;
  CHECK(rd_solver_new(k, 100.0, 0.01, 0.0, 0.0, &solver));

  /* omega = sin x2: coefficients -i/2 at (0,1) and i/2 at (0,-1) */
  size_t len = rd_field_len(k);
  double *w = calloc(len, sizeof(double));
  size_t side = 2 * k + 1;
  size_t up = k * side + (k + 1), down = k * side + (k - 1);
  w[2 * up + 1] = -0.5;
  w[2 * down + 1] = 0.5;
  CHECK(rd_solver_set_vorticity(solver, w, len));
  CHECK(rd_solver_step(solver, 100));

  CHECK(rd_solver_get_vorticity(solver, w, len));
  double expect = -0.5 * exp(-1.0 / 100.0);
  if (fabs(w[2 * up + 1] - expect) > 1e-12) {
    fprintf(stderr, "decay mismatch %.17g vs %.17g\n", w[2 * up + 1], expect);
    return 1;
  }

  RdDiagnostics d;
  CHECK(rd_solver_diagnostics(solver, &d));
  if (fabs(d.time - 1.0) > 1e-12) return 1;

  if (rd_solver_step(NULL, 1) != RD_STATUS_NULL_POINTER) return 1;

  double bound;
  CHECK(rd_exact_family_lower_bound(1.0, 1.0, 100.0, &bound));
  if (fabs(bound - 6.34835) > 1e-4) return 1;

  rd_solver_free(solver);
  free(w);
  printf("ok\n");
  return 0;
}
