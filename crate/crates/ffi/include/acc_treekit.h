#ifndef ACC_TREEKIT_H
#define ACC_TREEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AccStatus {
  ACC_STATUS_OK = 0,
  ACC_STATUS_NULL_ARGUMENT = 1,
  ACC_STATUS_INVALID_UTF8 = 2,
  ACC_STATUS_PARSE_ERROR = 3,
  ACC_STATUS_TRANSFORM_ERROR = 4,
  ACC_STATUS_EVAL_ERROR = 5,
  ACC_STATUS_GRAMMAR_ERROR = 6,
  ACC_STATUS_NO_PARSE = 7,
  ACC_STATUS_INTERNAL_ERROR = 8,
  ACC_STATUS_PANIC = 9,
} AccStatus;

// A parsed treebank.
typedef struct AccCorpus AccCorpus;

// A probabilistic grammar.
typedef struct AccGrammar AccGrammar;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library from the same thread.
const char *acc_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void acc_string_free(char *s);

// Parse bracketed trees.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum AccStatus acc_corpus_parse(const char *text, struct AccCorpus **out);

// Number of trees; 0 for NULL.
//
// # Safety
// `corpus` must be NULL or a live handle.
size_t acc_corpus_len(const struct AccCorpus *corpus);

// # Safety
// `corpus` must be NULL or a live handle, not used afterwards.
void acc_corpus_free(struct AccCorpus *corpus);

// Render the corpus, one tree per line unless `pretty`.
//
// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum AccStatus acc_corpus_serialize(const struct AccCorpus *corpus, bool pretty, char **out);

// Rewrite accepted instances. `report`, when not NULL, receives the JSON
// array of per-candidate records.
//
// # Safety
// `corpus` must be a live handle; `out` must be writable; `report` must be
// NULL or writable.
enum AccStatus acc_corpus_transform(const struct AccCorpus *corpus,
                                    struct AccCorpus **out,
                                    char **report);

// Restore co-indexed VP coordination.
//
// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum AccStatus acc_corpus_detransform(const struct AccCorpus *corpus, struct AccCorpus **out);

// JSON array with one object per coordination candidate.
//
// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum AccStatus acc_corpus_detect_json(const struct AccCorpus *corpus, char **out);

// Corpus census as a JSON object.
//
// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum AccStatus acc_corpus_census_json(const struct AccCorpus *corpus, char **out);

// Score predicted trees against a bracketed coordination annotation.
// The result is a JSON object keyed by metric name.
//
// # Safety
// `gold` must be a NUL-terminated string; `pred` a live handle; `out`
// writable.
enum AccStatus acc_eval_json(const char *gold, const struct AccCorpus *pred, char **out);

// Labeled bracket precision, recall and F1 as JSON.
//
// # Safety
// `gold` and `pred` must be live handles; `out` writable.
enum AccStatus acc_evalb_json(const struct AccCorpus *gold,
                              const struct AccCorpus *pred,
                              char **out);

// Extract a grammar from a corpus.
//
// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum AccStatus acc_grammar_train(const struct AccCorpus *corpus, struct AccGrammar **out);

// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum AccStatus acc_grammar_from_json(const char *json, struct AccGrammar **out);

// # Safety
// `grammar` must be a live handle; `out` must be writable.
enum AccStatus acc_grammar_to_json(const struct AccGrammar *grammar, char **out);

// Most probable tree for a whitespace-tokenized sentence, bracketed.
// Returns `NoParse` when the grammar cannot cover the sentence.
//
// # Safety
// `grammar` must be a live handle; `sentence` a NUL-terminated string;
// `out` writable.
enum AccStatus acc_grammar_parse(const struct AccGrammar *grammar,
                                 const char *sentence,
                                 char **out);

// # Safety
// `grammar` must be NULL or a live handle, not used afterwards.
void acc_grammar_free(struct AccGrammar *grammar);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACC_TREEKIT_H */
