/* C API of the wsptm shared library.
 *
 * All functions return a status code (WSPTM_OK on success); the message for
 * the most recent failure on the calling thread is available through
 * wsptm_last_error(). Objects are opaque handles released with the matching
 * _free function. Strings returned through char** out-parameters are owned
 * by the caller and released with wsptm_string_free().
 */
#ifndef WSPTM_H
#define WSPTM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define WSPTM_OK 0
#define WSPTM_ERR_INTERNAL 1
#define WSPTM_ERR_INPUT 2
#define WSPTM_ERR_CHECKPOINT 3

typedef struct wsptm_config wsptm_config;
typedef struct wsptm_corpus wsptm_corpus;
typedef struct wsptm_seeds wsptm_seeds;
typedef struct wsptm_model wsptm_model;

const char* wsptm_version(void);
const char* wsptm_last_error(void);
void wsptm_string_free(char* s);

/* -- configuration ------------------------------------------------------- */

wsptm_config* wsptm_config_new(void);
void wsptm_config_free(wsptm_config* cfg);
int wsptm_config_set(wsptm_config* cfg, const char* key, const char* value);
int wsptm_config_load_file(wsptm_config* cfg, const char* path);
/* Full key=value snapshot, one pair per line. */
int wsptm_config_dump(const wsptm_config* cfg, char** out);

/* -- corpus and seed words ------------------------------------------------ */

/* Reads the file named by the `corpus` key, applying the configured
 * preprocessing (min_doc_freq, min_word_len, stopwords). */
int wsptm_corpus_load(const wsptm_config* cfg, wsptm_corpus** out);
void wsptm_corpus_free(wsptm_corpus* corpus);
int wsptm_corpus_num_docs(const wsptm_corpus* corpus);
int wsptm_corpus_vocab_size(const wsptm_corpus* corpus);
int wsptm_corpus_num_labels(const wsptm_corpus* corpus);

/* Reads the file named by the `seeds` key against the corpus vocabulary. */
int wsptm_seeds_load(const wsptm_config* cfg, const wsptm_corpus* corpus, wsptm_seeds** out);
void wsptm_seeds_free(wsptm_seeds* seeds);
int wsptm_seeds_num_labels(const wsptm_seeds* seeds);

/* -- training and models -------------------------------------------------- */

int wsptm_train(const wsptm_config* cfg, const wsptm_corpus* corpus, const wsptm_seeds* seeds,
                wsptm_model** out);
void wsptm_model_free(wsptm_model* model);
int wsptm_model_save(const wsptm_model* model, const char* path);
int wsptm_model_load(const char* path, wsptm_model** out);
/* Objective trace as `iter,objective,penalty` CSV. */
int wsptm_model_trace_csv(const wsptm_model* model, char** out);
int wsptm_model_iterations(const wsptm_model* model);
/* Predicted label of one document; negative status codes are impossible,
 * errors set *out to -1. */
int wsptm_model_doc_label(const wsptm_model* model, int doc, int* out);
/* Copy of the configuration the model was trained with. */
int wsptm_model_config(const wsptm_model* model, wsptm_config** out);

/* -- evaluation and diagnostics ------------------------------------------- */

/* Classification metrics (and perplexity when enabled) of the test split,
 * as a JSON report. Fails with WSPTM_ERR_CHECKPOINT when the model was
 * trained on a different vocabulary. */
int wsptm_eval(const wsptm_model* model, const wsptm_config* cfg, const wsptm_corpus* corpus,
               const wsptm_seeds* seeds, char** json_out);

/* Marked-label coverage statistics as JSON. */
int wsptm_stats(const wsptm_config* cfg, const wsptm_corpus* corpus, const wsptm_seeds* seeds,
                char** json_out);

/* Parameter sweep over one axis (rho, tau, P, components); grid is a comma
 * list, a..b integer range, or empty for the default grid. Returns CSV. */
int wsptm_ablate(const wsptm_config* cfg, const wsptm_corpus* corpus, const wsptm_seeds* seeds,
                 const char* axis, const char* grid, char** csv_out);

/* Per-document supervision diagnostics (prior, membership, pseudo-neighbor
 * labels) as JSON lines. */
int wsptm_dump_priors(const wsptm_config* cfg, const wsptm_corpus* corpus,
                      const wsptm_seeds* seeds, char** jsonl_out);

/* Document neighbor graph as a tab-separated edge list, one `i TAB j` line
 * per undirected edge with i < j. */
int wsptm_dump_graph(const wsptm_config* cfg, const wsptm_corpus* corpus, char** tsv_out);

#ifdef __cplusplus
}
#endif

#endif /* WSPTM_H */
