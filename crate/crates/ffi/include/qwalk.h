/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef QWALK_H
#define QWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QwalkCandidate {
  QWALK_CANDIDATE_ZG = 0,
  QWALK_CANDIDATE_ZX = 1,
  QWALK_CANDIDATE_ZY = 2,
  QWALK_CANDIDATE_INV_S = 3,
} QwalkCandidate;

/**
 * Gluing function used by [`qwalk_bvp_evaluate`].
 */
typedef enum QwalkCgf {
  /**
   * Closed forms; simple walk only.
   */
  QWALK_CGF_NONE = 0,
  /**
   * `t + 1/t`.
   */
  QWALK_CGF_BUILTIN_CIRCLE = 1,
} QwalkCgf;

typedef enum QwalkMethod {
  QWALK_METHOD_CIRCLE_CLOSED_FORM = 0,
  QWALK_METHOD_CGF_INTEGRAL = 1,
  QWALK_METHOD_RELATION = 2,
} QwalkMethod;

/**
 * Which boundary generating function to compute.
 */
typedef enum QwalkSeriesLabel {
  /**
   * `Q(0,0,z)`
   */
  QWALK_SERIES_LABEL_Q00 = 0,
  /**
   * `Q(1,0,z)`
   */
  QWALK_SERIES_LABEL_Q10 = 1,
  /**
   * `Q(0,1,z)`
   */
  QWALK_SERIES_LABEL_Q01 = 2,
  /**
   * `Q(1,1,z)`
   */
  QWALK_SERIES_LABEL_Q11 = 3,
} QwalkSeriesLabel;

/**
 * Result code of every fallible call.
 */
typedef enum QwalkStatus {
  QWALK_STATUS_OK = 0,
  QWALK_STATUS_NULL_POINTER = 1,
  QWALK_STATUS_INVALID_UTF8 = 2,
  QWALK_STATUS_PANIC = 3,
  QWALK_STATUS_INDEX_OUT_OF_BOUNDS = 4,
  QWALK_STATUS_EMPTY_STEP_SET = 10,
  QWALK_STATUS_INVALID_STEP = 11,
  QWALK_STATUS_UNKNOWN_PRESET = 12,
  QWALK_STATUS_PARSE = 13,
  QWALK_STATUS_POLE_ENCOUNTERED = 20,
  QWALK_STATUS_DEGENERATE_GENERATORS = 21,
  QWALK_STATUS_TEST_POINT_EXHAUSTION = 22,
  QWALK_STATUS_RESOURCE_LIMIT = 30,
  QWALK_STATUS_ROOT_FINDING_FAILURE = 40,
  QWALK_STATUS_DEGENERATE_QUADRATIC = 41,
  QWALK_STATUS_GENUS_ZERO_REGIME = 42,
  QWALK_STATUS_SLIT_DEGENERATE = 43,
  QWALK_STATUS_SINGULAR_WALK = 50,
  QWALK_STATUS_NO_POSITIVE_SOLUTION = 51,
  QWALK_STATUS_VALIDATION_MISMATCH = 52,
  QWALK_STATUS_DIVISION_BY_ZERO = 53,
  QWALK_STATUS_OUT_OF_RANGE = 60,
  QWALK_STATUS_REMOVABLE_SINGULARITY = 61,
  QWALK_STATUS_POINT_OUTSIDE_DOMAIN = 62,
  QWALK_STATUS_CGF_UNAVAILABLE = 63,
  QWALK_STATUS_GLUING_VIOLATION = 64,
  QWALK_STATUS_ROOT_OUTSIDE_DOMAIN = 65,
  QWALK_STATUS_CASE_UNDETERMINED = 66,
  QWALK_STATUS_QUADRATURE_FAILURE = 67,
  QWALK_STATUS_ZERO_SEQUENCE = 70,
  QWALK_STATUS_INSUFFICIENT_DATA = 71,
} QwalkStatus;

/**
 * Opaque coefficient sequence.
 */
typedef struct QwalkSeries QwalkSeries;

/**
 * Opaque step set.
 */
typedef struct QwalkStepSet QwalkStepSet;

/**
 * First singularities and their ingredients.
 */
typedef struct QwalkSingularities {
  double z_g;
  double z_x;
  double z_y;
  double inv_s;
  int32_t drift_x;
  int32_t drift_y;
  int32_t covariance;
  /**
   * First positive singularity of `Q(1,0,z)`, `Q(0,1,z)` and `Q(1,1,z)`.
   */
  double fs_q10;
  double fs_q01;
  double fs_q11;
  /**
   * First designated candidate of each.
   */
  enum QwalkCandidate kind_q10;
  enum QwalkCandidate kind_q01;
  enum QwalkCandidate kind_q11;
} QwalkSingularities;

typedef struct QwalkGroupOrder {
  /**
   * False when no order up to `bound` was found.
   */
  bool finite;
  size_t order;
  size_t bound;
} QwalkGroupOrder;

typedef struct QwalkGfValue {
  double value;
  double z;
  double error_estimate;
  enum QwalkMethod method;
  bool on_boundary;
  bool one_sided_limit;
} QwalkGfValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *qwalk_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qwalk_version(void);

/**
 * Parses `{"steps": [[i,j], ...]}`.
 *
 * # Safety
 * `json` must be NULL or a NUL-terminated string; `out` must be NULL or
 * writable.
 */
enum QwalkStatus qwalk_stepset_from_json(const char *json, struct QwalkStepSet **out);

/**
 * One of `simple`, `kreweras`, `gessel`, `gouyou-beauchamps`.
 *
 * # Safety
 * As for [`qwalk_stepset_from_json`].
 */
enum QwalkStatus qwalk_stepset_from_preset(const char *name, struct QwalkStepSet **out);

/**
 * Bit `k` of `mask` selects the `k`-th step in the order
 * `(-1,-1), (-1,0), (-1,1), (0,-1), (0,1), (1,-1), (1,0), (1,1)`.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum QwalkStatus qwalk_stepset_from_mask(uint8_t mask, struct QwalkStepSet **out);

/**
 * `|S|`, or 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
uint32_t qwalk_stepset_cardinality(const struct QwalkStepSet *set);

/**
 * # Safety
 * `set` must be NULL or a handle not yet freed.
 */
void qwalk_stepset_free(struct QwalkStepSet *set);

/**
 * Exact coefficients `0..=n_max` of one boundary series.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum QwalkStatus qwalk_series_new(const struct QwalkStepSet *set,
                                  enum QwalkSeriesLabel label,
                                  size_t n_max,
                                  struct QwalkSeries **out);

/**
 * Number of coefficients, or 0 for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
size_t qwalk_series_len(const struct QwalkSeries *series);

/**
 * Coefficient `index` in decimal, to be released with [`qwalk_string_free`].
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum QwalkStatus qwalk_series_coefficient(const struct QwalkSeries *series,
                                          size_t index,
                                          char **out);

/**
 * Coefficient `index` rounded to a double (infinite past its range).
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum QwalkStatus qwalk_series_coefficient_f64(const struct QwalkSeries *series,
                                              size_t index,
                                              double *out);

/**
 * # Safety
 * `series` must be NULL or a handle not yet freed.
 */
void qwalk_series_free(struct QwalkSeries *series);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void qwalk_string_free(char *s);

/**
 * Classifies the first positive singularities.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum QwalkStatus qwalk_singularities(const struct QwalkStepSet *set,
                                     struct QwalkSingularities *out);

/**
 * Order of the group generated by the two birational involutions, searched
 * up to `2 * max_half_order`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum QwalkStatus qwalk_group_order(const struct QwalkStepSet *set,
                                   size_t max_half_order,
                                   uint64_t seed,
                                   struct QwalkGroupOrder *out);

/**
 * Evaluates a boundary generating function at `z`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum QwalkStatus qwalk_bvp_evaluate(const struct QwalkStepSet *set,
                                    enum QwalkSeriesLabel target,
                                    double z,
                                    enum QwalkCgf cgf,
                                    struct QwalkGfValue *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
