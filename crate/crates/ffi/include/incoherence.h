/*
 * C interface to the incoherence toolkit.
 *
 * Every fallible call returns an IncStatus; on failure a message is
 * available from inc_last_error_message(). Strings returned through out
 * parameters are owned by the caller and released with inc_string_free().
 * Handles are released with their matching *_free function.
 */

#ifndef INCOHERENCE_H
#define INCOHERENCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum IncStatus {
  INC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  INC_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  INC_STATUS_INVALID_UTF8 = 2,
  /**
   * The input failed to parse or violates a precondition.
   */
  INC_STATUS_INVALID_INPUT = 3,
  /**
   * A budget was exhausted before the computation finished.
   */
  INC_STATUS_RESOURCE_LIMIT = 4,
  /**
   * The input is well formed but outside what the library handles.
   */
  INC_STATUS_UNSUPPORTED = 5,
  /**
   * Internal error; the library state is unaffected.
   */
  INC_STATUS_PANIC = 6,
} IncStatus;

/**
 * Vinberg type of an indecomposable Cartan matrix.
 */
typedef enum IncCartanType {
  INC_CARTAN_TYPE_POSITIVE = 0,
  INC_CARTAN_TYPE_ZERO = 1,
  INC_CARTAN_TYPE_NEGATIVE = 2,
} IncCartanType;

/**
 * Opaque Cartan matrix.
 */
typedef struct IncCartan IncCartan;

/**
 * Opaque Coxeter diagram.
 */
typedef struct IncDiagram IncDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *inc_version(void);

/**
 * Copy of the calling thread's most recent error message, or null if the
 * last call succeeded. Release with [`inc_string_free`].
 */
char *inc_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void inc_string_free(char *s);

/**
 * Parses a diagram in the text format (`rank = n`, then `edge i j m` lines
 * with 1-based vertices).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum IncStatus inc_diagram_parse(const char *text, struct IncDiagram **out);

/**
 * The rank-5 Lannér pentagon with labels 4,3,3,3,3.
 */
struct IncDiagram *inc_diagram_pentagon(void);

/**
 * # Safety
 * `d` must be null or a live diagram handle; it is invalid afterwards.
 */
void inc_diagram_free(struct IncDiagram *d);

/**
 * # Safety
 * `d` must be a live diagram handle; `out` must be valid for a write.
 */
enum IncStatus inc_diagram_rank(const struct IncDiagram *d, size_t *out);

/**
 * Diagram analysis (Cartan matrix, signature, subdiagrams, Lannér test,
 * type, arithmeticity) as JSON.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be valid for a write.
 */
enum IncStatus inc_diagram_analyze_json(const struct IncDiagram *d, char **out);

/**
 * Parses a Cartan matrix from JSON: rows of integers or exact strings.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum IncStatus inc_cartan_from_json(const char *json, struct IncCartan **out);

/**
 * The symmetric Cartan matrix `-2cos(π/m_ij)` of a diagram.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be valid for a write.
 */
enum IncStatus inc_cartan_from_diagram(const struct IncDiagram *d, struct IncCartan **out);

/**
 * # Safety
 * `a` must be null or a live Cartan handle; it is invalid afterwards.
 */
void inc_cartan_free(struct IncCartan *a);

/**
 * The matrix as JSON rows (integers as numbers, other entries as exact strings).
 *
 * # Safety
 * `a` must be a live Cartan handle; `out` must be valid for a write.
 */
enum IncStatus inc_cartan_to_json(const struct IncCartan *a, char **out);

/**
 * Vinberg type, decided exactly. Decomposable matrices are `INC_STATUS_INVALID_INPUT`.
 *
 * # Safety
 * `a` must be a live Cartan handle; `out` must be valid for a write.
 */
enum IncStatus inc_cartan_type(const struct IncCartan *a, enum IncCartanType *out);

/**
 * Checks `(s_i s_j)^m_ij = 1` with exact orders for the integer reflection
 * representation of `a` against the labels of `d`. Writes whether every
 * pair passed to `all_pass` and the full report as JSON to `out`.
 *
 * # Safety
 * Handles must be live; `all_pass` and `out` must be valid for writes.
 */
enum IncStatus inc_verify_relations_json(const struct IncCartan *a,
                                         const struct IncDiagram *d,
                                         uint32_t order_cap,
                                         bool *all_pass,
                                         char **out);

/**
 * Zariski density certification for the integer reflection representation
 * of `a` (or its even-length subgroup when `even_subgroup` is set). Writes
 * whether a certificate was found and revalidated to `certified`, and
 * `{"outcome": ..., "revalidation": ...}` as JSON to `out`. An exhausted
 * word budget is a successful call with `certified == false`.
 *
 * # Safety
 * `a` must be live; `certified` and `out` must be valid for writes.
 */
enum IncStatus inc_density_certify_json(const struct IncCartan *a,
                                        bool even_subgroup,
                                        size_t word_length,
                                        uint64_t prime_bound,
                                        size_t max_words,
                                        bool *certified,
                                        char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INCOHERENCE_H */
