#ifndef MUALG_H
#define MUALG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum MualgStatus {
  MUALG_STATUS_OK = 0,
  MUALG_STATUS_NULL_POINTER = 1,
  MUALG_STATUS_INVALID_UTF8 = 2,
  MUALG_STATUS_PARSE_ERROR = 3,
  MUALG_STATUS_EVAL_ERROR = 4,
  MUALG_STATUS_UNKNOWN_SUITE = 5,
  MUALG_STATUS_PANIC = 6,
} MualgStatus;

/**
 * A finite Kripke model.
 */
typedef struct MualgModel MualgModel;

/**
 * A parsed term.
 */
typedef struct MualgTerm MualgTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *mualg_last_error(void);

/**
 * Library version as a static string.
 */
const char *mualg_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mualg_string_free(char *s);

/**
 * Parses `src` into a new term stored at `*out`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MualgStatus mualg_term_parse(const char *src, struct MualgTerm **out);

/**
 * # Safety
 * `t` must be null or a handle from this library not yet freed.
 */
void mualg_term_free(struct MualgTerm *t);

/**
 * Canonical text of `t`; null if `t` is null.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
char *mualg_term_print(const struct MualgTerm *t);

/**
 * Negation normal form of `t` as a new handle; null if `t` is null.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
struct MualgTerm *mualg_term_nnf(const struct MualgTerm *t);

/**
 * Fixed-point fragment: 0 sigma1, 1 pi1, 2 compositions of both, 3 general,
 * -1 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
int32_t mualg_term_fragment(const struct MualgTerm *t);

/**
 * Parses a model document into a new handle at `*out`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MualgStatus mualg_model_parse(const char *src, struct MualgModel **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void mualg_model_free(struct MualgModel *m);

/**
 * Number of states, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t mualg_model_states(const struct MualgModel *m);

/**
 * Denotation of a closed term as a bit mask of states (bit `i` is state `i`).
 *
 * # Safety
 * `m` and `t` must be live handles and `out` a writable pointer.
 */
enum MualgStatus mualg_eval(const struct MualgModel *m, const struct MualgTerm *t, uint64_t *out);

/**
 * Runs an acceptance suite. `budget` 0 selects the default. Sets
 * `*passed` and, if `report` is non-null, stores the report text there.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `passed` writable, and `report`
 * null or writable.
 */
enum MualgStatus mualg_suite_run(const char *name,
                                 uint64_t seed,
                                 size_t budget,
                                 bool *passed,
                                 char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUALG_H */
