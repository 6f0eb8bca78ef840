#ifndef BINREC_H
#define BINREC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which half of a sequence pair an operation addresses.
 */
typedef enum {
  /**
   * The sequence starting 0, 1 (u side).
   */
  BINREC_SIDE_FUNDAMENTAL = 0,
  /**
   * The companion sequence starting 2, r (v side).
   */
  BINREC_SIDE_COMPANION = 1,
} BinrecSide;

/**
 * Status code returned by every fallible entry point.
 */
typedef enum {
  BINREC_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  BINREC_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument was rejected (bad pair, bad index, unparsable input).
   */
  BINREC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The factoring or precision budget ran out before an answer.
   */
  BINREC_STATUS_BUDGET_EXHAUSTED = 3,
} BinrecStatus;

/**
 * Opaque handle to a validated sequence pair.
 */
typedef struct BinrecPair BinrecPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread; never free
 * it.
 */
const char *binrec_last_error_message(void);

/**
 * Release a string obtained from this library.
 *
 * # Safety
 * `s` must have come from a binrec function and not have been freed yet.
 * NULL is accepted and ignored.
 */
void binrec_string_free(char *s);

/**
 * Create a pair handle for x^2 = r*x + s. Fails for degenerate input
 * (r or s zero, gcd(r, s) > 1, nonpositive discriminant, |r| or |s|
 * beyond 2^31).
 *
 * # Safety
 * `out` must be a valid pointer. On success `*out` owns the handle;
 * release it with `binrec_pair_free`.
 */
BinrecStatus binrec_pair_new(int64_t r, int64_t s, BinrecPair **out);

/**
 * Release a pair handle. NULL is accepted and ignored.
 *
 * # Safety
 * `pair` must have come from `binrec_pair_new` and not have been freed
 * yet.
 */
void binrec_pair_free(BinrecPair *pair);

/**
 * Decimal rendering of the term at index `n` on the chosen side.
 * Negative indices are accepted only when |s| = 1.
 *
 * # Safety
 * `pair` must be a live handle; `out` must be a valid pointer. On
 * success `*out` holds a string to release with `binrec_string_free`.
 */
BinrecStatus binrec_term_decimal(const BinrecPair *pair, BinrecSide side, int64_t n, char **out);

/**
 * Order of appearance of the prime `p` and the exponent of `p` in the
 * term it first divides.
 *
 * # Safety
 * `pair` must be a live handle; `z_out` and `e_out` must be valid
 * pointers.
 */
BinrecStatus binrec_order_of_appearance(const BinrecPair *pair,
                                        uint64_t p,
                                        uint64_t *z_out,
                                        uint32_t *e_out);

/**
 * Eventual period and preperiod of the residue pair sequence modulo `m`.
 *
 * # Safety
 * `pair` must be a live handle; `period_out` and `preperiod_out` must be
 * valid pointers.
 */
BinrecStatus binrec_period(const BinrecPair *pair,
                           uint64_t m,
                           uint64_t *period_out,
                           uint64_t *preperiod_out);

/**
 * Whether the decimal integer in `decimal` is a (deterministically
 * checked below 2^64, otherwise strongly probable) prime. Writes 1 or 0.
 *
 * # Safety
 * `decimal` must be a NUL-terminated string; `result_out` must be a
 * valid pointer.
 */
BinrecStatus binrec_is_probable_prime(const char *decimal, int32_t *result_out);

/**
 * Factor the decimal integer in `decimal` with the given Pollard rho
 * iteration budget and write the factorization as canonical JSON. When
 * the budget runs out the partial factorization is still written and the
 * status is BudgetExhausted.
 *
 * # Safety
 * `decimal` must be a NUL-terminated string; `out` must be a valid
 * pointer. Any written string is released with `binrec_string_free`.
 */
BinrecStatus binrec_factor_json(const char *decimal, uint64_t effort, char **out);

/**
 * Run the continued-fraction reduction on a JSON instance (string fields
 * gamma, mu, a, b in expression syntax, m a decimal integer) and write
 * the outcome as canonical JSON.
 *
 * # Safety
 * `instance_json` must be a NUL-terminated string; `out` must be a valid
 * pointer. The written string is released with `binrec_string_free`.
 */
BinrecStatus binrec_reduce_json(const char *instance_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BINREC_H */
