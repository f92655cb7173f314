#ifndef SURFCALC_H
#define SURFCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SurfcalcStatus {
  SURFCALC_STATUS_OK = 0,
  SURFCALC_STATUS_NULL_POINTER = 1,
  SURFCALC_STATUS_INVALID_UTF8 = 2,
  SURFCALC_STATUS_PARSE_ERROR = 3,
  SURFCALC_STATUS_INVALID_SURFACE = 4,
  SURFCALC_STATUS_GENUS_TOO_SMALL = 5,
  SURFCALC_STATUS_OUT_OF_RANGE = 6,
  SURFCALC_STATUS_FAILED = 7,
  SURFCALC_STATUS_PANIC = 8,
} SurfcalcStatus;

typedef enum SurfcalcVerdict {
  SURFCALC_VERDICT_HOMEOMORPHIC = 0,
  SURFCALC_VERDICT_DISTINCT = 1,
  SURFCALC_VERDICT_UNKNOWN = 2,
} SurfcalcVerdict;

/**
 * A validated surface.
 */
typedef struct SurfcalcSurface SurfcalcSurface;

/**
 * A word over compact letters and handle-shifts.
 */
typedef struct SurfcalcWord SurfcalcWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next failing
 * call on the same thread.
 */
const char *surfcalc_last_error(void);

/**
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SurfcalcStatus surfcalc_surface_from_json(const char *json, struct SurfcalcSurface **out);

/**
 * # Safety
 * `s` must come from `surfcalc_surface_from_json` and not be freed twice.
 */
void surfcalc_surface_free(struct SurfcalcSurface *s);

/**
 * # Safety
 * Handles must be live; `out` must be valid.
 */
enum SurfcalcStatus surfcalc_surface_homeomorphic(const struct SurfcalcSurface *a,
                                                  const struct SurfcalcSurface *b,
                                                  enum SurfcalcVerdict *out);

/**
 * Number of ends accumulated by genus; -1 when infinite.
 *
 * # Safety
 * `s` must be live; `out` must be valid.
 */
enum SurfcalcStatus surfcalc_surface_genus_ends(const struct SurfcalcSurface *s, int64_t *out);

/**
 * Rank of `H^1(PMod; Z)`: 0 when trivial, -1 for a countable direct sum.
 *
 * # Safety
 * `s` must be live; `out` must be valid.
 */
enum SurfcalcStatus surfcalc_cohomology_rank(const struct SurfcalcSurface *s,
                                             uint32_t depth,
                                             int64_t *out);

/**
 * Compare two end expressions.
 *
 * # Safety
 * `a` and `b` must be nul-terminated strings; `out` must be valid.
 */
enum SurfcalcStatus surfcalc_ends_equivalent(const char *a,
                                             const char *b,
                                             enum SurfcalcVerdict *out);

/**
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum SurfcalcStatus surfcalc_word_parse(const char *text, struct SurfcalcWord **out);

/**
 * # Safety
 * `w` must come from `surfcalc_word_parse` and not be freed twice.
 */
void surfcalc_word_free(struct SurfcalcWord *w);

/**
 * Exponent sum of shift `index`; `rank` bounds valid indices, 0 for no bound.
 *
 * # Safety
 * `w` must be live; `out` must be valid.
 */
enum SurfcalcStatus surfcalc_word_psi(const struct SurfcalcWord *w,
                                      size_t index,
                                      uint64_t rank,
                                      int64_t *out);

/**
 * Normal form after pushing compact letters to the front, as text.
 *
 * # Safety
 * `w` must be live; `out` must be valid. Free the result with
 * `surfcalc_string_free`.
 */
enum SurfcalcStatus surfcalc_word_normal_form(const struct SurfcalcWord *w, char **out);

/**
 * # Safety
 * `out` must be valid.
 */
enum SurfcalcStatus surfcalc_relation_check(uint32_t window, bool *out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void surfcalc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SURFCALC_H */
