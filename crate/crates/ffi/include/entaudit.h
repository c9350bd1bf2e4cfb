#ifndef ENTAUDIT_H
#define ENTAUDIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest state accepted across the boundary, in qubits.
 */
#define ENTAUDIT_MAX_QUBITS 24

typedef enum EntauditStatus {
  ENTAUDIT_STATUS_OK = 0,
  ENTAUDIT_STATUS_NULL_POINTER = 1,
  ENTAUDIT_STATUS_INVALID_INPUT = 2,
  ENTAUDIT_STATUS_PARSE_ERROR = 3,
  ENTAUDIT_STATUS_ZERO_STATE = 4,
  ENTAUDIT_STATUS_GUARD = 5,
  ENTAUDIT_STATUS_INTERNAL = 6,
} EntauditStatus;

/**
 * Opaque gate layout.
 */
typedef struct EntauditLayout EntauditLayout;

typedef struct EntauditProp2Summary {
  uint32_t trees;
  /**
   * Trees with some prefix cut of rank at least 3.
   */
  uint32_t blocked_trees;
  int64_t half_power;
  uint32_t amplitudes;
  bool pass;
} EntauditProp2Summary;

typedef struct EntauditSymmetricBound {
  uint64_t capacity;
  uint64_t load;
  double bound;
  double ratio;
  bool holds;
} EntauditSymmetricBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *entaudit_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void entaudit_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *entaudit_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EntauditStatus entaudit_layout_default(struct EntauditLayout **out);

/**
 * Parses seven `vi vj` lines.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum EntauditStatus entaudit_layout_parse(const char *text, struct EntauditLayout **out);

/**
 * # Safety
 * `layout` must be null or a handle from this library, not yet freed.
 */
void entaudit_layout_free(struct EntauditLayout *layout);

/**
 * Text form of a layout; free the result with [`entaudit_string_free`].
 *
 * # Safety
 * `layout` must be a live handle; `out` must be writable.
 */
enum EntauditStatus entaudit_layout_to_text(const struct EntauditLayout *layout, char **out);

/**
 * Checks all 5040 line trees against the quarter-pi target of `layout`.
 *
 * # Safety
 * `layout` must be a live handle; `out` must be writable.
 */
enum EntauditStatus entaudit_verify_prop2(const struct EntauditLayout *layout,
                                          struct EntauditProp2Summary *out);

/**
 * Floating Schmidt rank of `2^n_qubits` amplitudes (qubit 0 is the most
 * significant index bit) across the qubits listed in `left`.
 *
 * # Safety
 * `re` and `im` must each point to `2^n_qubits` doubles, `left` to
 * `n_left` indices, and `out` must be writable.
 */
enum EntauditStatus entaudit_schmidt_rank_float(const double *re,
                                                const double *im,
                                                size_t n_qubits,
                                                const size_t *left,
                                                size_t n_left,
                                                size_t *out);

/**
 * Exact Schmidt rank of Gaussian-integer amplitudes `re + i·im`.
 *
 * # Safety
 * As for [`entaudit_schmidt_rank_float`], with 64-bit integer arrays.
 */
enum EntauditStatus entaudit_schmidt_rank_exact(const int64_t *re,
                                                const int64_t *im,
                                                size_t n_qubits,
                                                const size_t *left,
                                                size_t n_left,
                                                size_t *out);

/**
 * Uniform capacities `ceil(d^(1/m))` on `K_2m`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EntauditStatus entaudit_bound_symmetric(size_t m,
                                             uint64_t d,
                                             struct EntauditSymmetricBound *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTAUDIT_H */
