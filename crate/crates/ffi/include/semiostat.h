#ifndef SEMIOSTAT_H
#define SEMIOSTAT_H

/* Generated by cbindgen from the semiostat-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SemiostatStatus {
  SEMIOSTAT_STATUS_OK = 0,
  SEMIOSTAT_STATUS_NULL_POINTER = 1,
  SEMIOSTAT_STATUS_INVALID_UTF8 = 2,
  SEMIOSTAT_STATUS_PARSE = 3,
  SEMIOSTAT_STATUS_INVALID_PARAM = 4,
  SEMIOSTAT_STATUS_IO = 5,
  SEMIOSTAT_STATUS_RUN_FAILED = 6,
  SEMIOSTAT_STATUS_BUFFER_TOO_SMALL = 7,
  SEMIOSTAT_STATUS_PANIC = 8,
} SemiostatStatus;

typedef enum SemiostatTrajectoryKind {
  SEMIOSTAT_TRAJECTORY_KIND_CONVERGED = 0,
  SEMIOSTAT_TRAJECTORY_KIND_MAX_ITER_REACHED = 1,
  SEMIOSTAT_TRAJECTORY_KIND_CYCLE_DETECTED = 2,
} SemiostatTrajectoryKind;

typedef enum SemiostatStability {
  SEMIOSTAT_STABILITY_ATTRACTING = 0,
  SEMIOSTAT_STABILITY_REPELLING = 1,
  SEMIOSTAT_STABILITY_NEUTRAL = 2,
} SemiostatStability;

/**
 * Parsed scenario.
 */
typedef struct SemiostatScenario SemiostatScenario;

/**
 * Recorded scalar trajectory.
 */
typedef struct SemiostatTrajectory SemiostatTrajectory;

typedef struct SemiostatScalarParams {
  double alpha;
  double beta;
  double epsilon;
  double tol;
  size_t max_iter;
} SemiostatScalarParams;

typedef struct SemiostatContractionReport {
  double bound;
  bool is_certified;
  double empirical_max;
} SemiostatContractionReport;

/**
 * `fixed_point` and `step` are meaningful for `CONVERGED`, `period` for
 * `CYCLE_DETECTED`.
 */
typedef struct SemiostatTrajectoryStatus {
  enum SemiostatTrajectoryKind kind;
  double fixed_point;
  size_t step;
  size_t period;
} SemiostatTrajectoryStatus;

typedef struct SemiostatFixedPoint {
  double x;
  double derivative;
  enum SemiostatStability stability;
} SemiostatFixedPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *semiostat_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void semiostat_string_free(char *s);

/**
 * Parses and resolves a scenario; `*out` receives a new handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum SemiostatStatus semiostat_scenario_parse(const char *text,
                                              struct SemiostatScenario **out_handle);

/**
 * # Safety
 * `handle` must be null or a handle from [`semiostat_scenario_parse`] not
 * yet freed.
 */
void semiostat_scenario_free(struct SemiostatScenario *handle);

/**
 * Runs all directives. `out_dir` may be null, in which case plots are
 * skipped. `*report` receives the report text and `*failed` is set to 1 if
 * any run failed.
 *
 * # Safety
 * Pointers must be valid; `out_dir` may be null.
 */
enum SemiostatStatus semiostat_scenario_run(const struct SemiostatScenario *handle,
                                            const char *out_dir,
                                            char **report,
                                            int *failed);

/**
 * Runs only the law checks.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_scenario_check(const struct SemiostatScenario *handle,
                                              char **report,
                                              int *failed);

/**
 * Canonical text of the scenario.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_scenario_pretty(const struct SemiostatScenario *handle, char **text);

/**
 * Default epsilon, tolerance and iteration cap for the given map.
 */
struct SemiostatScalarParams semiostat_scalar_params_default(double alpha, double beta);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_phi(const struct SemiostatScalarParams *p, double x, double *value);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_phi_derivative(const struct SemiostatScalarParams *p,
                                              double x,
                                              double *value);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_contraction_report(const struct SemiostatScalarParams *p,
                                                  struct SemiostatContractionReport *report);

/**
 * Iterates the projected map from `x0`; `*out` receives a new handle.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_iterate(const struct SemiostatScalarParams *p,
                                       double x0,
                                       struct SemiostatTrajectory **out_handle);

/**
 * # Safety
 * `handle` must be null or a live handle from [`semiostat_iterate`].
 */
void semiostat_trajectory_free(struct SemiostatTrajectory *handle);

/**
 * Number of samples `x_0, …, x_T`; 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t semiostat_trajectory_len(const struct SemiostatTrajectory *handle);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SemiostatStatus semiostat_trajectory_status(const struct SemiostatTrajectory *handle,
                                                 struct SemiostatTrajectoryStatus *status);

/**
 * Copies the sample values into `buffer`. `*written` receives the number
 * of samples; if `capacity` is too small nothing is copied and
 * `BUFFER_TOO_SMALL` is returned with `*written` set to the required size.
 *
 * # Safety
 * `buffer` must have room for `capacity` doubles (or be null when
 * `capacity` is 0).
 */
enum SemiostatStatus semiostat_trajectory_samples(const struct SemiostatTrajectory *handle,
                                                  double *buffer,
                                                  size_t capacity,
                                                  size_t *written);

/**
 * Fixed points in `[lo, hi]`, with the same buffer protocol as
 * [`semiostat_trajectory_samples`].
 *
 * # Safety
 * `buffer` must have room for `capacity` entries (or be null when
 * `capacity` is 0).
 */
enum SemiostatStatus semiostat_find_fixed_points(const struct SemiostatScalarParams *p,
                                                 double lo,
                                                 double hi,
                                                 struct SemiostatFixedPoint *buffer,
                                                 size_t capacity,
                                                 size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMIOSTAT_H */
