#ifndef BREASE_H
#define BREASE_H

/* Generated by cbindgen from the brease-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Column selector for draw export.
 */
typedef enum BreaseColumn {
  BREASE_COLUMN_THETA0 = 0,
  BREASE_COLUMN_ETA_E = 1,
  BREASE_COLUMN_ETA_S = 2,
  BREASE_COLUMN_THETA1 = 3,
} BreaseColumn;

/**
 * Monotonicity constraint selector for the C ABI.
 */
typedef enum BreaseConstraint {
  BREASE_CONSTRAINT_NO_HARM = 0,
  BREASE_CONSTRAINT_NO_BENEFIT = 1,
} BreaseConstraint;

/**
 * Estimand selector for posterior summaries.
 */
typedef enum BreaseEstimand {
  BREASE_ESTIMAND_THETA0 = 0,
  BREASE_ESTIMAND_THETA1 = 1,
  BREASE_ESTIMAND_ETA_E = 2,
  BREASE_ESTIMAND_ETA_S = 3,
  BREASE_ESTIMAND_RISK_RATIO = 4,
  BREASE_ESTIMAND_RISK_DIFFERENCE = 5,
  BREASE_ESTIMAND_VACCINE_EFFICACY = 6,
} BreaseEstimand;

/**
 * Status codes returned by every fallible function.
 */
typedef enum BreaseStatus {
  BREASE_STATUS_OK = 0,
  BREASE_STATUS_NULL_POINTER = 1,
  BREASE_STATUS_INVALID_ARGUMENT = 2,
  BREASE_STATUS_VALIDATION_ERROR = 3,
  BREASE_STATUS_NUMERIC_ERROR = 4,
} BreaseStatus;

/**
 * A set of posterior draws (opaque).
 */
typedef struct BreaseDraws BreaseDraws;

/**
 * Prior hyperparameters in mean/sample-size form (opaque).
 */
typedef struct BreasePriorHandle BreasePriorHandle;

/**
 * Observed 2x2 counts of a binary experiment (opaque).
 */
typedef struct BreaseTrial BreaseTrial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent error on this thread, or NULL when the last
 * call succeeded. The pointer stays valid until the next failing call on
 * the same thread.
 */
const char *brease_last_error_message(void);

/**
 * Library version as a static C string.
 */
const char *brease_version(void);

/**
 * Create trial data from the four counts.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum BreaseStatus brease_trial_new(uint64_t y0,
                                   uint64_t n0,
                                   uint64_t y1,
                                   uint64_t n1,
                                   struct BreaseTrial **out);

/**
 * # Safety
 * `trial` must be a pointer returned by `brease_trial_new`, not yet freed.
 */
void brease_trial_free(struct BreaseTrial *trial);

/**
 * Create a prior from the six hyperparameters.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum BreaseStatus brease_prior_new(double mu0,
                                   double mue,
                                   double mus,
                                   double n0,
                                   double ne,
                                   double ns,
                                   struct BreasePriorHandle **out);

/**
 * The default prior family with expected effect size `mu`.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum BreaseStatus brease_prior_default(double mu, struct BreasePriorHandle **out);

/**
 * The empirical-Bayes prior for the given data with prior sample size `n`.
 *
 * # Safety
 * `trial` must be a live trial handle; `out` writable.
 */
enum BreaseStatus brease_prior_empirical_bayes(const struct BreaseTrial *trial,
                                               double n,
                                               struct BreasePriorHandle **out);

/**
 * # Safety
 * `prior` must be a pointer returned by a prior constructor, not yet freed.
 */
void brease_prior_free(struct BreasePriorHandle *prior);

/**
 * Draw `t` exact i.i.d. posterior samples.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_exact_sample(const struct BreaseTrial *trial,
                                      const struct BreasePriorHandle *prior,
                                      uint64_t t,
                                      uint64_t seed,
                                      struct BreaseDraws **out);

/**
 * Run the data-augmentation sampler for `t` iterations, keeping every
 * `thin`-th state after `burn_in`.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_gibbs_sample(const struct BreaseTrial *trial,
                                      const struct BreasePriorHandle *prior,
                                      uint64_t t,
                                      uint64_t burn_in,
                                      uint64_t thin,
                                      uint64_t seed,
                                      struct BreaseDraws **out);

/**
 * Exact sampling under a monotonicity constraint.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_monotone_sample(const struct BreaseTrial *trial,
                                         const struct BreasePriorHandle *prior,
                                         enum BreaseConstraint constraint,
                                         uint64_t t,
                                         uint64_t seed,
                                         struct BreaseDraws **out);

/**
 * # Safety
 * `draws` must be a pointer returned by a sampling function, not yet freed.
 */
void brease_draws_free(struct BreaseDraws *draws);

/**
 * Number of draws in the set.
 *
 * # Safety
 * `draws` must be a live draws handle.
 */
uintptr_t brease_draws_len(const struct BreaseDraws *draws);

/**
 * Copy one column of the draw matrix into `buf` (capacity `len`); fails
 * unless `len` matches the number of draws.
 *
 * # Safety
 * `draws` must be a live handle and `buf` must point to at least `len`
 * writable doubles.
 */
enum BreaseStatus brease_draws_column(const struct BreaseDraws *draws,
                                      enum BreaseColumn column,
                                      double *buf,
                                      uintptr_t len);

/**
 * Median and equal-tailed interval of an estimand over the draws.
 *
 * # Safety
 * `draws` must be a live handle; the three outputs must be writable.
 */
enum BreaseStatus brease_summarize(const struct BreaseDraws *draws,
                                   enum BreaseEstimand estimand,
                                   double level,
                                   double *median,
                                   double *cri_low,
                                   double *cri_high);

/**
 * Log marginal likelihood of the null (shared-risk) model.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_log_ml_m0(const struct BreaseTrial *trial,
                                   const struct BreasePriorHandle *prior,
                                   double *out);

/**
 * Log marginal likelihood of the unconstrained model.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_log_ml_m1(const struct BreaseTrial *trial,
                                   const struct BreasePriorHandle *prior,
                                   double *out);

/**
 * Log marginal likelihood under a monotonicity constraint.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_log_ml_monotone(const struct BreaseTrial *trial,
                                         const struct BreasePriorHandle *prior,
                                         enum BreaseConstraint constraint,
                                         double *out);

/**
 * BF10 of the unconstrained model against the shared-risk null.
 *
 * # Safety
 * `trial` and `prior` must be live handles; `out` writable.
 */
enum BreaseStatus brease_bf10(const struct BreaseTrial *trial,
                              const struct BreasePriorHandle *prior,
                              double *out);

/**
 * Savage-Dickey BF10 for the symmetric independent-beta comparator.
 *
 * # Safety
 * `trial` must be a live handle; `out` writable.
 */
enum BreaseStatus brease_ib_bf10(const struct BreaseTrial *trial, double a, double *out);

/**
 * BF10 for the logit comparator with prior scales (1, sigma_psi).
 *
 * # Safety
 * `trial` must be a live handle; `out` writable.
 */
enum BreaseStatus brease_lt_bf10(const struct BreaseTrial *trial, double sigma_psi, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BREASE_H */
