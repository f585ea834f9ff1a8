#ifndef PITE_SIM_H
#define PITE_SIM_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PiteStatus {
  PITE_STATUS_OK = 0,
  PITE_STATUS_NULL_POINTER = 1,
  PITE_STATUS_INVALID_ARGUMENT = 2,
  PITE_STATUS_PARSE = 3,
  PITE_STATUS_DIMENSION_TOO_LARGE = 4,
  PITE_STATUS_ANNIHILATED = 5,
  PITE_STATUS_BUDGET_EXHAUSTED = 6,
  PITE_STATUS_VACUOUS = 7,
  PITE_STATUS_IO = 8,
  PITE_STATUS_UNAVAILABLE = 9,
  PITE_STATUS_PANIC = 10,
} PiteStatus;

/**
 * A model with its initial state, grouping and (when small enough) spectrum.
 */
typedef struct PiteModel PiteModel;

/**
 * The observable trace of one run.
 */
typedef struct PiteTrace PiteTrace;

/**
 * Run settings. Obtain defaults from [`pite_run_options_default`].
 */
typedef struct PiteRunOptions {
  double dt;
  double beta;
  /**
   * 1 or 2.
   */
  uint32_t order;
  /**
   * Sample ancilla outcomes and restart on failure instead of postselecting.
   */
  bool sample;
  uint64_t seed;
  bool noisy;
  double eps_relax;
  double eps_dephase;
  /**
   * Zero selects the density-matrix backend for noisy runs.
   */
  size_t trajectories;
  size_t cadence;
  size_t restart_budget;
} PiteRunOptions;

/**
 * One row of a trace.
 */
typedef struct PiteRecord {
  size_t step;
  double beta;
  double energy;
  double fidelity;
  double p_cum;
  double rlb;
  double alb;
  size_t restarts;
} PiteRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * H2 at a tabulated distance `r` (Å). `init` and `grouping` may be null.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum PiteStatus pite_model_h2(double r,
                              const char *init,
                              const char *grouping,
                              struct PiteModel **out);

/**
 * Six-qubit LiH.
 *
 * # Safety
 * See [`pite_model_h2`].
 */
enum PiteStatus pite_model_lih(const char *init, const char *grouping, struct PiteModel **out);

/**
 * Periodic transverse-field Ising ring.
 *
 * # Safety
 * See [`pite_model_h2`].
 */
enum PiteStatus pite_model_ising(size_t n,
                                 double j,
                                 double g,
                                 double h,
                                 const char *init,
                                 const char *grouping,
                                 struct PiteModel **out);

/**
 * Hamiltonian from a text file; `grouping` may name a grouping file.
 *
 * # Safety
 * See [`pite_model_h2`]; `path` must not be null.
 */
enum PiteStatus pite_model_file(const char *path,
                                const char *init,
                                const char *grouping,
                                struct PiteModel **out);

/**
 * Hamiltonian from in-memory text, ungrouped. `init` is `hf` (all zeros),
 * `product:PHI` or a bit string, and may be null.
 *
 * # Safety
 * `text` must be NUL-terminated; `init` null or NUL-terminated; `out` writable.
 */
enum PiteStatus pite_model_parse(const char *text, const char *init, struct PiteModel **out);

/**
 * # Safety
 * `model` must come from a `pite_model_*` constructor or be null.
 */
void pite_model_free(struct PiteModel *model);

/**
 * Work-register size, 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
size_t pite_model_n_qubits(const struct PiteModel *model);

/**
 * Exact ground energy, offset included.
 *
 * # Safety
 * `model` must be a live handle; `out` writable.
 */
enum PiteStatus pite_model_ground_energy(const struct PiteModel *model, double *out);

/**
 * Noiseless postselected first-order run with `dt = 0.05`, `β = 1`.
 */
struct PiteRunOptions pite_run_options_default(void);

/**
 * Runs `model`. On budget exhaustion the partial trace is still returned
 * through `out` together with `BudgetExhausted`.
 *
 * # Safety
 * `model` and `options` must be valid; `out` writable.
 */
enum PiteStatus pite_run(const struct PiteModel *model,
                         const struct PiteRunOptions *options,
                         struct PiteTrace **out);

/**
 * # Safety
 * `trace` must come from [`pite_run`] or be null.
 */
void pite_trace_free(struct PiteTrace *trace);

/**
 * Number of records, 0 for a null handle.
 *
 * # Safety
 * `trace` must be a live handle or null.
 */
size_t pite_trace_len(const struct PiteTrace *trace);

/**
 * Total restarts, 0 for a null handle.
 *
 * # Safety
 * `trace` must be a live handle or null.
 */
size_t pite_trace_restarts(const struct PiteTrace *trace);

/**
 * # Safety
 * `trace` must be a live handle; `out` writable.
 */
enum PiteStatus pite_trace_record(const struct PiteTrace *trace,
                                  size_t index,
                                  struct PiteRecord *out);

/**
 * Writes the trace as CSV.
 *
 * # Safety
 * `trace` must be a live handle; `path` NUL-terminated.
 */
enum PiteStatus pite_trace_write_csv(const struct PiteTrace *trace, const char *path);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or hold `len` bytes.
 */
size_t pite_last_error(char *buf, size_t len);

/**
 * Library version, a static NUL-terminated string.
 */
const char *pite_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PITE_SIM_H */
