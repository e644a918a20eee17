#ifndef DEFHULL_H
#define DEFHULL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DefhullCommand {
  DEFHULL_COMMAND_COHOMOLOGY = 0,
  DEFHULL_COMMAND_HULL = 1,
  DEFHULL_COMMAND_ORACLE = 2,
  DEFHULL_COMMAND_WEIGHTS = 3,
  DEFHULL_COMMAND_SELFTEST = 4,
} DefhullCommand;

/**
 * Status codes; the nonzero values above 1 agree with the command-line exit codes.
 */
typedef enum DefhullStatus {
  DEFHULL_STATUS_OK = 0,
  DEFHULL_STATUS_INVALID_ARGUMENT = 1,
  DEFHULL_STATUS_SCHEMA = 2,
  DEFHULL_STATUS_PRECONDITION = 3,
  DEFHULL_STATUS_BUDGET = 4,
  DEFHULL_STATUS_MISMATCH = 5,
  DEFHULL_STATUS_PANIC = 6,
} DefhullStatus;

/**
 * Opaque job description.
 */
typedef struct DefhullJob DefhullJob;

/**
 * Opaque command report.
 */
typedef struct DefhullReport DefhullReport;

/**
 * Parses and validates a JSON job.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer to writable storage.
 */
enum DefhullStatus defhull_job_from_json(const char *json, struct DefhullJob **out);

/**
 * One of the built-in fixture jobs by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer to writable storage.
 */
enum DefhullStatus defhull_job_fixture(const char *name, struct DefhullJob **out);

/**
 * The job serialized back to JSON; release with [`defhull_string_free`].
 *
 * # Safety
 * `job` must be a live handle or null.
 */
char *defhull_job_to_json(const struct DefhullJob *job);

/**
 * # Safety
 * `job` must come from this library and not be freed twice.
 */
void defhull_job_free(struct DefhullJob *job);

/**
 * Runs a command. A failed comparison still yields a report and returns
 * [`DefhullStatus::Mismatch`]. `job` may be null for the self-test.
 *
 * # Safety
 * `job` must be a live handle (or null for the self-test) and `out` a valid pointer.
 */
enum DefhullStatus defhull_run(const struct DefhullJob *job,
                               enum DefhullCommand command,
                               struct DefhullReport **out);

/**
 * Human-readable report text, owned by the report.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *defhull_report_text(const struct DefhullReport *report);

/**
 * Machine-readable report, owned by the report.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *defhull_report_json(const struct DefhullReport *report);

/**
 * # Safety
 * `report` must be a live handle or null.
 */
bool defhull_report_passed(const struct DefhullReport *report);

/**
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void defhull_report_free(struct DefhullReport *report);

/**
 * Writes `dim H⁰, dim H¹, dim H²` of the job's local system into `dims[0..3]`.
 *
 * # Safety
 * `job` must be a live handle and `dims` must point to three writable `size_t`.
 */
enum DefhullStatus defhull_cohomology_dims(const struct DefhullJob *job, size_t *dims);

/**
 * Rank-`rank` trivial-system cohomology of a presentation complex, without a JSON job.
 * `relators` holds `n_relators` NUL-terminated words; `dims` receives three values.
 *
 * # Safety
 * All pointers must be valid for the given lengths.
 */
enum DefhullStatus defhull_presentation_dims(const char *const *generators,
                                             size_t n_generators,
                                             const char *const *relators,
                                             size_t n_relators,
                                             size_t rank,
                                             size_t *dims);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void defhull_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next call.
 */
const char *defhull_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *defhull_version(void);

#endif  /* DEFHULL_H */
