/* C interface for the cfg-testset library. */

#ifndef CFG_TESTSET_H
#define CFG_TESTSET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of a fallible call.
 */
typedef enum CfgStatus {
  CFG_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  CFG_STATUS_NULL_ARGUMENT = 1,
  /**
   * An input string was not valid UTF-8.
   */
  CFG_STATUS_INVALID_UTF8 = 2,
  /**
   * The grammar text did not parse.
   */
  CFG_STATUS_PARSE_ERROR = 3,
  /**
   * The start symbol derives no word; the operation needs a nonempty
   * language.
   */
  CFG_STATUS_EMPTY_LANGUAGE = 4,
  /**
   * An index was out of range.
   */
  CFG_STATUS_OUT_OF_RANGE = 5,
  /**
   * An internal invariant failed; report this as a bug.
   */
  CFG_STATUS_INTERNAL = 6,
} CfgStatus;

/**
 * An immutable context-free grammar.
 */
typedef struct CfgGrammar CfgGrammar;

/**
 * A test set together with the grammar it was built from.
 */
typedef struct CfgTestSet CfgTestSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure in this thread. The pointer
 * stays valid until the next failing call on the same thread. Never NULL.
 */
const char *cfg_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must have been returned by a function of this library and not yet
 * freed.
 */
void cfg_string_free(char *s);

/**
 * Parses a grammar from UTF-8 text and stores a new handle in `*out`.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to writable
 * pointer storage.
 */
enum CfgStatus cfg_grammar_parse(const char *text, struct CfgGrammar **out);

/**
 * Releases a grammar handle. NULL is ignored.
 *
 * # Safety
 * `g` must have come from [`cfg_grammar_parse`] and not yet been freed.
 */
void cfg_grammar_free(struct CfgGrammar *g);

/**
 * The grammar size metric: the sum over rules of `|rhs| + 1`. Returns 0
 * for NULL.
 *
 * # Safety
 * `g` must be a live grammar handle or NULL.
 */
size_t cfg_grammar_size(const struct CfgGrammar *g);

/**
 * Number of rules. Returns 0 for NULL.
 *
 * # Safety
 * `g` must be a live grammar handle or NULL.
 */
size_t cfg_grammar_rule_count(const struct CfgGrammar *g);

/**
 * True iff every rule has at most one nonterminal occurrence. Returns
 * false for NULL.
 *
 * # Safety
 * `g` must be a live grammar handle or NULL.
 */
bool cfg_grammar_is_linear(const struct CfgGrammar *g);

/**
 * Serializes the grammar back to its textual format.
 *
 * # Safety
 * `g` must be a live grammar handle; `out` must point to writable
 * pointer storage.
 */
enum CfgStatus cfg_grammar_to_text(const struct CfgGrammar *g, char **out);

/**
 * Rewrites the grammar into its linear test-set grammar and returns the
 * textual form, witness words and provenance included as comments.
 *
 * # Safety
 * `g` must be a live grammar handle; `out` must point to writable
 * pointer storage.
 */
enum CfgStatus cfg_grammar_linearize_text(const struct CfgGrammar *g, char **out);

/**
 * Builds the test set of the grammar with the given `k` (3 gives the
 * `2|G|^3` bound). An empty language yields an empty set, not an error.
 *
 * # Safety
 * `g` must be a live grammar handle; `out` must point to writable
 * pointer storage.
 */
enum CfgStatus cfg_test_set_build(const struct CfgGrammar *g,
                                  size_t k,
                                  bool filter_optimal,
                                  struct CfgTestSet **out);

/**
 * Releases a test-set handle. NULL is ignored.
 *
 * # Safety
 * `ts` must have come from [`cfg_test_set_build`] and not yet been freed.
 */
void cfg_test_set_free(struct CfgTestSet *ts);

/**
 * Number of words in the set. Returns 0 for NULL.
 *
 * # Safety
 * `ts` must be a live test-set handle or NULL.
 */
size_t cfg_test_set_len(const struct CfgTestSet *ts);

/**
 * The size bound the construction guarantees for this set. Returns 0
 * for NULL.
 *
 * # Safety
 * `ts` must be a live test-set handle or NULL.
 */
uint64_t cfg_test_set_bound(const struct CfgTestSet *ts);

/**
 * Renders word `index` of the set (single-character alphabets
 * concatenated, otherwise space-separated; `eps` for the empty word).
 *
 * # Safety
 * `ts` must be a live test-set handle; `out` must point to writable
 * pointer storage.
 */
enum CfgStatus cfg_test_set_word(const struct CfgTestSet *ts, size_t index, char **out);

/**
 * Serializes the whole set (words, provenance, bound) as a JSON document.
 *
 * # Safety
 * `ts` must be a live test-set handle; `out` must point to writable
 * pointer storage.
 */
enum CfgStatus cfg_test_set_to_json(const struct CfgTestSet *ts, char **out);

/**
 * Runs the randomized morphism check against this set's own grammar and
 * stores the number of violations in `*out_violations` (zero means the
 * check passed).
 *
 * # Safety
 * `ts` must be a live test-set handle; `out_violations` must point to
 * writable storage.
 */
enum CfgStatus cfg_test_set_check(const struct CfgTestSet *ts,
                                  uint64_t trials,
                                  size_t max_len,
                                  size_t max_image_len,
                                  uint64_t seed,
                                  uint64_t *out_violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFG_TESTSET_H */
