#ifndef POSET_SECRETARY_H
#define POSET_SECRETARY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible entry point.
 */
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_ARGUMENT = 2,
  PS_STATUS_CYCLE = 3,
  PS_STATUS_OUT_OF_RANGE = 4,
  PS_STATUS_TOO_LARGE = 5,
  PS_STATUS_PARSE = 6,
  PS_STATUS_PANIC = 7,
} PsStatus;

/**
 * Opaque poset handle.
 */
typedef struct PsPoset PsPoset;

/**
 * Monte Carlo estimate with its 95% Wilson interval.
 */
typedef struct PsReport {
  size_t n;
  size_t k_max;
  size_t width;
  uint64_t trials;
  uint64_t successes;
  double estimate;
  double ci_low;
  double ci_high;
  double std_error;
  uint64_t seed;
} PsReport;

/**
 * Components of the lower bound for posets with a known maximal count.
 */
typedef struct PsKnownMaxBound {
  double bound;
  double conditional;
  double rejection_factor;
} PsKnownMaxBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ps_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * NUL-terminated when `len > 0`). Returns the full message length without
 * the terminator, so a caller can size a buffer with a first call using
 * `len == 0`.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null when `len == 0`.
 */
size_t ps_last_error_message(char *buf, size_t len);

/**
 * Builds a poset on `n` elements from `count` pairs `(u, v)` meaning
 * `u < v`, stored flat in `pairs` (length `2 * count`). The transitive
 * closure is taken.
 *
 * # Safety
 * `pairs` must point to `2 * count` values (may be null when `count == 0`);
 * `out` must be a valid pointer.
 */
enum PsStatus ps_poset_from_relations(size_t n,
                                      const size_t *pairs,
                                      size_t count,
                                      struct PsPoset **out);

/**
 * Parses the text format (`poset <n>` header followed by `u < v` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum PsStatus ps_poset_parse(const char *text, struct PsPoset **out);

/**
 * Builds a family member from a descriptor such as
 * `disjoint_chains(k=2,x=3)`, `binary_tree(depth=3)` or
 * `random(n=6,density=0.3,seed=1)`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum PsStatus ps_poset_family(const char *descriptor, struct PsPoset **out);

/**
 * Releases a handle. Null is accepted.
 *
 * # Safety
 * `poset` must come from a `ps_poset_*` constructor and not be used again.
 */
void ps_poset_free(struct PsPoset *poset);

/**
 * Number of elements (0 for a null handle).
 *
 * # Safety
 * `poset` must be a live handle or null.
 */
size_t ps_poset_len(const struct PsPoset *poset);

/**
 * Number of maximal elements (0 for a null handle).
 *
 * # Safety
 * `poset` must be a live handle or null.
 */
size_t ps_poset_maximal_count(const struct PsPoset *poset);

/**
 * Width, the size of a largest antichain (0 for a null handle).
 *
 * # Safety
 * `poset` must be a live handle or null.
 */
size_t ps_poset_width(const struct PsPoset *poset);

/**
 * Whether `u < v` in the poset. Out-of-range ids and null give false.
 *
 * # Safety
 * `poset` must be a live handle or null.
 */
bool ps_poset_less(const struct PsPoset *poset, size_t u, size_t v);

/**
 * Exact success probability of the randomized rule τ_k(p).
 *
 * # Safety
 * `poset` must be a live handle; `out` must be a valid pointer.
 */
enum PsStatus ps_exact_tau(const struct PsPoset *poset, size_t k, double p, double *out);

/**
 * Exact success probability of the classical rule that skips the first
 * `r - 1` arrivals.
 *
 * # Safety
 * `poset` must be a live handle; `out` must be a valid pointer.
 */
enum PsStatus ps_exact_threshold(const struct PsPoset *poset, size_t r, double *out);

/**
 * Optimal success probability over all stopping rules.
 *
 * # Safety
 * `poset` must be a live handle; `out` must be a valid pointer.
 */
enum PsStatus ps_optimal_value(const struct PsPoset *poset, double *out);

/**
 * Monte Carlo estimate for τ_k(p). `threads == 0` uses every core; the
 * result does not depend on the thread count.
 *
 * # Safety
 * `poset` must be a live handle; `out` must be a valid pointer.
 */
enum PsStatus ps_estimate_tau(const struct PsPoset *poset,
                              size_t k,
                              double p,
                              uint64_t trials,
                              uint64_t seed,
                              size_t threads,
                              struct PsReport *out);

/**
 * Recommended warm-up probability for τ_k; NaN when `k == 0`.
 */
double ps_p_star(size_t k);

/**
 * Lower bound on τ_k(p) for posets of width at most k.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PsStatus ps_chain_lower_bound(size_t k, double p, double *out);

/**
 * Lower bound on τ_k(p) for posets with exactly k maximal elements.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PsStatus ps_known_max_lower_bound(size_t k, double p, struct PsKnownMaxBound *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSET_SECRETARY_H */
