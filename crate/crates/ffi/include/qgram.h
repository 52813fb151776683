#ifndef QGRAM_H
#define QGRAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QgramStatus {
  QGRAM_STATUS_OK = 0,
  QGRAM_STATUS_NULL_POINTER = 1,
  QGRAM_STATUS_INVALID_UTF8 = 2,
  QGRAM_STATUS_PARSE_ERROR = 3,
  QGRAM_STATUS_UNKNOWN_ID = 4,
  QGRAM_STATUS_INVALID_ARGUMENT = 5,
  QGRAM_STATUS_EVAL_ERROR = 6,
  QGRAM_STATUS_PANIC = 7,
} QgramStatus;

/**
 * An element of the free group algebra.
 */
typedef struct QgramExpr QgramExpr;

/**
 * A grammar with its optional evaluation map and seed.
 */
typedef struct QgramGrammar QgramGrammar;

/**
 * A Laurent polynomial with integer coefficients.
 */
typedef struct QgramPoly QgramPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qgram_last_error(void);

/**
 * Looks up a built-in grammar by id, e.g. "G_tan".
 *
 * # Safety
 * `id` must be a nul-terminated string and `out` a writable pointer.
 */
enum QgramStatus qgram_grammar_from_catalog(const char *id, struct QgramGrammar **out);

/**
 * Parses a grammar file.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum QgramStatus qgram_grammar_parse(const char *text, struct QgramGrammar **out);

/**
 * Copies the grammar's seed into a new expression.
 *
 * # Safety
 * `g` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_grammar_seed(const struct QgramGrammar *g, struct QgramExpr **out);

/**
 * Prints the grammar in file form. Free the result with `qgram_string_free`.
 *
 * # Safety
 * `g` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_grammar_to_string(const struct QgramGrammar *g, char **out);

/**
 * # Safety
 * `g` must come from this library or be NULL, and must not be used afterwards.
 */
void qgram_grammar_free(struct QgramGrammar *g);

/**
 * Parses an expression such as "x[0]*y[1]^-1 + q*x[2]".
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum QgramStatus qgram_expr_parse(const char *text, struct QgramExpr **out);

/**
 * Computes D^n(a) under grammar `g`.
 *
 * # Safety
 * `g` and `a` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_derive_n(const struct QgramGrammar *g,
                                const struct QgramExpr *a,
                                uint32_t n,
                                struct QgramExpr **out);

/**
 * Number of terms of `a`.
 *
 * # Safety
 * `a` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_expr_omega(const struct QgramExpr *a, size_t *out);

/**
 * Canonical text form. Free the result with `qgram_string_free`.
 *
 * # Safety
 * `a` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_expr_to_string(const struct QgramExpr *a, char **out);

/**
 * Canonical JSON form. Free the result with `qgram_string_free`.
 *
 * # Safety
 * `a` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_expr_to_json(const struct QgramExpr *a, char **out);

/**
 * Parses the JSON form produced by `qgram_expr_to_json`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum QgramStatus qgram_expr_from_json(const char *text, struct QgramExpr **out);

/**
 * # Safety
 * `a` must come from this library or be NULL, and must not be used afterwards.
 */
void qgram_expr_free(struct QgramExpr *a);

/**
 * Applies the grammar's evaluation map to `a`.
 *
 * # Safety
 * `g` and `a` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_evaluate(const struct QgramGrammar *g,
                                const struct QgramExpr *a,
                                struct QgramPoly **out);

/**
 * Coefficients 0..=order of the generating function of `a`, as JSON.
 * Free the result with `qgram_string_free`.
 *
 * # Safety
 * `g` and `a` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_series_json(const struct QgramGrammar *g,
                                   const struct QgramExpr *a,
                                   uint32_t order,
                                   char **out);

/**
 * Canonical text form. Free the result with `qgram_string_free`.
 *
 * # Safety
 * `p` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_poly_to_string(const struct QgramPoly *p, char **out);

/**
 * Canonical JSON form. Free the result with `qgram_string_free`.
 *
 * # Safety
 * `p` must come from this library and `out` must be writable.
 */
enum QgramStatus qgram_poly_to_json(const struct QgramPoly *p, char **out);

/**
 * # Safety
 * `p` must come from this library or be NULL, and must not be used afterwards.
 */
void qgram_poly_free(struct QgramPoly *p);

/**
 * Predicted number of terms of D^n(seed) for a built-in grammar.
 *
 * # Safety
 * `id` must be a nul-terminated string and `out` a writable pointer.
 */
enum QgramStatus qgram_term_count(const char *id, uint32_t n, uint64_t *out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library or be NULL, and must not be used afterwards.
 */
void qgram_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGRAM_H */
