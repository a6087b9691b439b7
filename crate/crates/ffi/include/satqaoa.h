#ifndef SATQAOA_H
#define SATQAOA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum SatqaoaStatus {
  SATQAOA_STATUS_OK = 0,
  SATQAOA_STATUS_NULL_POINTER = 1,
  SATQAOA_STATUS_INVALID_ARGUMENT = 2,
  SATQAOA_STATUS_RESOURCE_LIMIT = 3,
  SATQAOA_STATUS_PARSE_ERROR = 4,
  SATQAOA_STATUS_BUFFER_TOO_SMALL = 5,
  SATQAOA_STATUS_RUN_FAILED = 6,
  SATQAOA_STATUS_PANIC = 7,
} SatqaoaStatus;

typedef enum SatqaoaVariant {
  SATQAOA_VARIANT_BASELINE = 0,
  SATQAOA_VARIANT_V1 = 1,
  SATQAOA_VARIANT_V2 = 2,
  SATQAOA_VARIANT_V3 = 3,
} SatqaoaVariant;

typedef enum SatqaoaOptimizer {
  SATQAOA_OPTIMIZER_SIMPLEX = 0,
  SATQAOA_OPTIMIZER_QUASI_NEWTON = 1,
  SATQAOA_OPTIMIZER_SPSA = 2,
} SatqaoaOptimizer;

/**
 * Opaque 3SAT formula.
 */
typedef struct SatqaoaFormula SatqaoaFormula;

/**
 * Options for [`satqaoa_run_instance`]. Start from
 * [`satqaoa_run_options_default`].
 */
typedef struct SatqaoaRunOptions {
  enum SatqaoaOptimizer optimizer;
  /**
   * Objective evaluations per restart.
   */
  size_t max_evaluations;
  size_t restarts;
  uint64_t shots;
  /**
   * Satisfying-fraction threshold in (0, 1]; 0 means any satisfying shot.
   */
  double threshold;
} SatqaoaRunOptions;

typedef struct SatqaoaRunResult {
  bool decided_satisfiable;
  bool ground_truth_satisfiable;
  bool success;
  /**
   * Fraction of shots that satisfy the formula.
   */
  double sat_proportion;
  /**
   * Exact expected binary cost at the optimized parameters.
   */
  double expectation;
  /**
   * Best value of the optimized cost.
   */
  double objective;
} SatqaoaRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *satqaoa_last_error_message(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void satqaoa_string_free(char *s);

/**
 * Random formula with `m` clauses over `n` variables.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum SatqaoaStatus satqaoa_formula_generate(size_t n,
                                            size_t m,
                                            uint64_t seed,
                                            struct SatqaoaFormula **out);

/**
 * Parse DIMACS CNF text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a valid pointer.
 */
enum SatqaoaStatus satqaoa_formula_from_dimacs(const char *text, struct SatqaoaFormula **out);

/**
 * Serialize to DIMACS CNF. Free the result with [`satqaoa_string_free`].
 *
 * # Safety
 * `f` must be a live handle; `out` a valid pointer.
 */
enum SatqaoaStatus satqaoa_formula_to_dimacs(const struct SatqaoaFormula *f, char **out);

/**
 * Release a formula. NULL is ignored.
 *
 * # Safety
 * `f` must come from this library and not have been freed.
 */
void satqaoa_formula_free(struct SatqaoaFormula *f);

/**
 * Variable count, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live handle.
 */
size_t satqaoa_formula_num_vars(const struct SatqaoaFormula *f);

/**
 * Clause count, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live handle.
 */
size_t satqaoa_formula_num_clauses(const struct SatqaoaFormula *f);

/**
 * Classical satisfiability check.
 *
 * # Safety
 * `f` must be a live handle; `out` a valid pointer.
 */
enum SatqaoaStatus satqaoa_formula_is_satisfiable(const struct SatqaoaFormula *f, bool *out);

/**
 * Exact expected binary cost of the ansatz state. `params` holds the free
 * parameters: `p` gammas then `p` betas for Baseline and V1, `p` betas for
 * V2 and V3.
 *
 * # Safety
 * `f` must be a live handle, `params` must point to `len` doubles, `out`
 * must be valid.
 */
enum SatqaoaStatus satqaoa_expected_cost(const struct SatqaoaFormula *f,
                                         enum SatqaoaVariant variant,
                                         size_t p,
                                         const double *params,
                                         size_t len,
                                         double *out);

/**
 * Basis-state probabilities of the ansatz state, written to `buf`, which
 * must hold `2^n` doubles. `params` is laid out as in
 * [`satqaoa_expected_cost`].
 *
 * # Safety
 * `f` must be a live handle, `params` must point to `len` doubles, `buf`
 * to `buf_len` doubles.
 */
enum SatqaoaStatus satqaoa_probabilities(const struct SatqaoaFormula *f,
                                         enum SatqaoaVariant variant,
                                         size_t p,
                                         const double *params,
                                         size_t len,
                                         double *buf,
                                         size_t buf_len);

struct SatqaoaRunOptions satqaoa_run_options_default(void);

/**
 * Optimize, sample and decide, scoring against classical ground truth.
 *
 * # Safety
 * `f` must be a live handle; `options` NULL or valid; `out` valid.
 */
enum SatqaoaStatus satqaoa_run_instance(const struct SatqaoaFormula *f,
                                        enum SatqaoaVariant variant,
                                        size_t p,
                                        const struct SatqaoaRunOptions *options,
                                        uint64_t seed,
                                        struct SatqaoaRunResult *out);

/**
 * Gate-count report as JSON. Free the result with
 * [`satqaoa_string_free`].
 *
 * # Safety
 * `f` must be a live handle; `out` a valid pointer.
 */
enum SatqaoaStatus satqaoa_resources_json(const struct SatqaoaFormula *f,
                                          enum SatqaoaVariant variant,
                                          size_t p,
                                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SATQAOA_H */
