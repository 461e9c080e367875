#ifndef LPOLY_H
#define LPOLY_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LpolyStatus {
  LPOLY_STATUS_OK = 0,
  /**
   * invalid or inconsistent parameters
   */
  LPOLY_STATUS_BAD_PARAMETERS = 1,
  /**
   * an enumeration or permutation bound was hit
   */
  LPOLY_STATUS_BOUND = 2,
  /**
   * an internal consistency check failed
   */
  LPOLY_STATUS_INTERNAL = 3,
  LPOLY_STATUS_NULL_POINTER = 4,
  LPOLY_STATUS_PANIC = 5,
} LpolyStatus;

/**
 * Character-sum engine with its per-field caches.
 */
typedef struct LpolyEngine LpolyEngine;

/**
 * Newton polygon handle.
 */
typedef struct LpolyPolygon LpolyPolygon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. Owned by the
 * library and valid until the next call on this thread.
 */
const char *lpoly_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lpoly_string_free(char *s);

/**
 * # Safety
 * `out` must be writable.
 */
enum LpolyStatus lpoly_hs_twisted(uint64_t d,
                                  uint64_t e,
                                  uint64_t r,
                                  uint64_t kappa,
                                  struct LpolyPolygon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LpolyStatus lpoly_gnp_twisted(uint64_t p,
                                   uint64_t d,
                                   uint64_t e,
                                   uint64_t kappa,
                                   struct LpolyPolygon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LpolyStatus lpoly_hs_power(uint64_t d, uint64_t e, uint64_t r, struct LpolyPolygon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LpolyStatus lpoly_gnp_power(uint64_t p, uint64_t d, uint64_t e, struct LpolyPolygon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LpolyStatus lpoly_hodge(uint64_t n, struct LpolyPolygon **out);

/**
 * # Safety
 * `poly` must be null or a live handle.
 */
void lpoly_polygon_free(struct LpolyPolygon *poly);

/**
 * # Safety
 * `poly` must be a live handle.
 */
uint64_t lpoly_polygon_length(const struct LpolyPolygon *poly);

/**
 * `{"vertices": [[x, "a/b"], ...], "slopes": [["a/b", len], ...]}`.
 *
 * # Safety
 * `poly` must be a live handle, `out` writable.
 */
enum LpolyStatus lpoly_polygon_to_json(const struct LpolyPolygon *poly, char **out);

/**
 * Writes whether `upper` is on or above `lower` at every abscissa.
 *
 * # Safety
 * Both handles must be live, `out` writable.
 */
enum LpolyStatus lpoly_polygon_lies_above(const struct LpolyPolygon *upper,
                                          const struct LpolyPolygon *lower,
                                          bool *out);

/**
 * # Safety
 * `a`, `b` must be live handles.
 */
bool lpoly_polygon_equal(const struct LpolyPolygon *a, const struct LpolyPolygon *b);

/**
 * New engine enumerating fields of at most `max_enum` elements (0 for the
 * default). `precision` 0 picks the default working precision.
 *
 * # Safety
 * `out` must be writable.
 */
enum LpolyStatus lpoly_engine_new(uint64_t max_enum, uint32_t precision, struct LpolyEngine **out);

/**
 * # Safety
 * `engine` must be null or a live handle.
 */
void lpoly_engine_free(struct LpolyEngine *engine);

/**
 * q-adic Newton polygon of `L(P, chi^kappa)` over `F_{p^m}`, where
 * `P = x^e + sum_{i<e} a_i x^i` with `a_1..a_{e-1}` given as `coeffs`
 * (encodings `sum c_j p^j`) and `chi` of order `d` pinned by the
 * lex-smallest generator.
 *
 * # Safety
 * `engine` live; `coeffs` readable for `ncoeffs` values; `out` writable.
 */
enum LpolyStatus lpoly_twisted_newton_polygon(const struct LpolyEngine *engine,
                                              uint64_t p,
                                              uint32_t m,
                                              uint64_t d,
                                              uint64_t e,
                                              uint64_t kappa,
                                              const uint64_t *coeffs,
                                              size_t ncoeffs,
                                              struct LpolyPolygon **out);

/**
 * q-adic Newton polygon of `L(P(x^d))` over `F_{p^m}`.
 *
 * # Safety
 * As for [`lpoly_twisted_newton_polygon`].
 */
enum LpolyStatus lpoly_power_newton_polygon(const struct LpolyEngine *engine,
                                            uint64_t p,
                                            uint32_t m,
                                            uint64_t d,
                                            uint64_t e,
                                            const uint64_t *coeffs,
                                            size_t ncoeffs,
                                            struct LpolyPolygon **out);

/**
 * Hasse polynomial evaluated at the coefficients of `P`: the product over
 * `n = 1..e` of the twisted factors when `kappa >= 1`, the full product for
 * `P(x^d)` when `kappa = 0`. Writes the value's encoding to `value`.
 *
 * # Safety
 * `coeffs` readable for `ncoeffs` values; `value` writable.
 */
enum LpolyStatus lpoly_hasse_eval(uint64_t p,
                                  uint32_t m,
                                  uint64_t d,
                                  uint64_t e,
                                  uint64_t kappa,
                                  const uint64_t *coeffs,
                                  size_t ncoeffs,
                                  uint64_t *value);

/**
 * Copies the last error into `buf` (NUL-terminated, truncated to `len`);
 * returns the full message length.
 *
 * # Safety
 * `buf` writable for `len` bytes, or null with `len = 0`.
 */
size_t lpoly_last_error_copy(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPOLY_H */
