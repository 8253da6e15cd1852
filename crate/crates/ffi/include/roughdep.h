#ifndef ROUGHDEP_H
#define ROUGHDEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Growth law selector for [`rd_fit`].
typedef enum RdModel {
  // `y = A e^{σ√x}`
  RD_MODEL_SQRT_EXP = 0,
  // `y = A e^{λx}`
  RD_MODEL_EXP = 1,
  // `y = C x^p`
  RD_MODEL_POWER = 2,
} RdModel;

// Result of every fallible call.
typedef enum RdStatus {
  RD_STATUS_OK = 0,
  RD_STATUS_NULL_POINTER = 1,
  RD_STATUS_INVALID_ARGUMENT = 2,
  RD_STATUS_NUMERICAL = 3,
  RD_STATUS_IO = 4,
  RD_STATUS_FORMAT = 5,
  RD_STATUS_DEGENERATE_FIT = 6,
  RD_STATUS_PANIC = 99,
} RdStatus;

// Opaque vorticity solver: configuration plus current state.
typedef struct RdSolver RdSolver;

// Flow diagnostics of the current solver state.
typedef struct RdDiagnostics {
  double time;
  double energy;
  double enstrophy;
  double palinstrophy;
  // Velocity Sobolev norms of index 0 through 4.
  double velocity_norms[5];
} RdDiagnostics;

// Parameters and statistics of a log-domain least-squares fit.
typedef struct RdFit {
  // `σ`, `λ` or `p`.
  double rate;
  // `A` or `C`.
  double scale;
  double residual;
  double rate_stderr;
} RdFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Number of doubles holding one scalar field at truncation `k_max`.
size_t rd_field_len(size_t k_max);

// Creates a solver at rest (zero vorticity) at `t = 0`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum RdStatus rd_solver_new(size_t k_max,
                            double reynolds,
                            double dt,
                            double mean_u1,
                            double mean_u2,
                            struct RdSolver **out);

// Releases a solver. Null is ignored.
//
// # Safety
// `solver` must come from this library and not be used afterwards.
void rd_solver_free(struct RdSolver *solver);

// Replaces the vorticity; time and step count are kept.
//
// # Safety
// `solver` must be a live handle; `data` must point to `len` doubles.
enum RdStatus rd_solver_set_vorticity(struct RdSolver *solver, const double *data, size_t len);

// Copies the vorticity into `out`, which holds `len` doubles.
//
// # Safety
// `solver` must be a live handle; `out` must be valid for `len` doubles.
enum RdStatus rd_solver_get_vorticity(const struct RdSolver *solver, double *out, size_t len);

// Advances `n_steps` steps of the configured size. On a numerical failure
// the state is left at the last good step.
//
// # Safety
// `solver` must be a live handle.
enum RdStatus rd_solver_step(struct RdSolver *solver, size_t n_steps);

// Current time, or NaN for a null handle.
//
// # Safety
// `solver` must be null or a live handle.
double rd_solver_time(const struct RdSolver *solver);

// # Safety
// `solver` must be a live handle; `out` must be valid for writing.
enum RdStatus rd_solver_diagnostics(const struct RdSolver *solver, struct RdDiagnostics *out);

// Writes the current state as a binary checkpoint.
//
// # Safety
// `solver` must be a live handle; `path` a NUL-terminated string.
enum RdStatus rd_solver_write_checkpoint(const struct RdSolver *solver, const char *path);

// Creates a solver from a checkpoint, which fixes `K`, Re and the time.
//
// # Safety
// `path` must be a NUL-terminated string; `out` valid for one pointer.
enum RdStatus rd_solver_from_checkpoint(const char *path,
                                        double dt,
                                        double mean_u1,
                                        double mean_u2,
                                        struct RdSolver **out);

// Sobolev norm `‖f‖ₙ` of a field with `components` (1 or 2) components.
//
// # Safety
// `data` must point to `len` doubles; `out` must be valid for writing.
enum RdStatus rd_sobolev_norm(const double *data,
                              size_t len,
                              size_t k_max,
                              size_t components,
                              uint32_t n,
                              double *out);

// Closed-form squared `Hⁿ` norm of the translation derivative, summed
// over both axes, for a velocity field (2 components).
//
// # Safety
// `data` must point to `len` doubles; `out` must be valid for writing.
enum RdStatus rd_translation_derivative_normsq(const double *data,
                                               size_t len,
                                               size_t k_max,
                                               uint32_t n,
                                               double t,
                                               double *out);

// Lower bound on the `H³` norm of the σ-derivative of the exact family;
// requires finite Re and `t > 0`.
//
// # Safety
// `out` must be valid for writing.
enum RdStatus rd_exact_family_lower_bound(double gamma, double t, double reynolds, double *out);

// `H³` norm of the σ-derivative of the exact family. When the series
// diverges, `*divergent` is set to 1 and `*out` to infinity.
//
// # Safety
// `out` and `divergent` must be valid for writing.
enum RdStatus rd_dsigma_h3_norm(double gamma,
                                double sigma,
                                double reynolds,
                                double t,
                                double *out,
                                int32_t *divergent);

// Least-squares fit of `n` samples `(x[i], y[i])` to `model`.
//
// # Safety
// `x` and `y` must point to `n` doubles; `out` must be valid for writing.
enum RdStatus rd_fit(enum RdModel model,
                     const double *x,
                     const double *y,
                     size_t n,
                     struct RdFit *out);

// Message of the last failure on this thread; empty if none. Owned by
// the library.
const char *rd_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUGHDEP_H */
