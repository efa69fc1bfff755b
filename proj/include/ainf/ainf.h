/* C interface to the A-infinity toolkit.  Every command returns a result
 * handle carrying an exit status, a plain-text report and a JSON report.
 * Files are loaded through a session so that cross-referenced entities are
 * shared. */
#ifndef AINF_H
#define AINF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ainf_status {
  AINF_OK = 0,          /* every check passed */
  AINF_FAIL = 1,        /* a check failed */
  AINF_INPUT_ERROR = 2, /* parse, type or usage error */
  AINF_NOT_CLOSED = 3   /* the candidate is not closed */
} ainf_status;

typedef struct ainf_session ainf_session;
typedef struct ainf_result ainf_result;

ainf_session* ainf_session_new(void);
void ainf_session_free(ainf_session* s);

ainf_status ainf_result_status(const ainf_result* r);
const char* ainf_result_text(const ainf_result* r);
const char* ainf_result_json(const ainf_result* r);
void ainf_result_free(ainf_result* r);

/* relation check of any spec file */
ainf_result* ainf_validate(ainf_session* s, const char* path);

/* complex: hom | cc-chains | cc-cochains | 2cc-chains | 2cc-cochains;
 * coeff: "diag" or a bimodule file; path: a category or corpus file */
ainf_result* ainf_homology(ainf_session* s, const char* path, const char* complex, const char* coeff, int max_len);

/* form: hochschild | bimodule | yoneda; cross_check runs all three */
ainf_result* ainf_check_cy(ainf_session* s, const char* path, const char* pairing, const char* form, int max_len,
                           int cross_check);

typedef struct ainf_relative_args {
  const char* a;         /* category A */
  const char* b;         /* category B */
  const char* i;         /* functor B -> A */
  const char* irel;      /* morphism B_diag -> I^*(A_rel) */
  const char* candidate; /* pairing over A with coefficient A_rel */
  const char* sigma_b;   /* optional pairing over B, NULL to skip */
  int max_len;
} ainf_relative_args;
ainf_result* ainf_check_relative(ainf_session* s, const ainf_relative_args* args);

/* which: dualization-phi | pullback-dualization | g-pullback | g-dualization;
 * random instances over the category of path (category or corpus file) */
ainf_result* ainf_diagram(ainf_session* s, const char* which, const char* path, int samples, unsigned long long seed);

/* writes the spec files of a corpus entry into out_dir */
ainf_result* ainf_corpus(const char* name, const char* out_dir);
size_t ainf_corpus_count(void);
const char* ainf_corpus_name(size_t i);

/* AINF_MAX_LEN if set to a non-negative integer, else 3; -1 if malformed */
int ainf_default_max_len(void);

#ifdef __cplusplus
}
#endif

#endif
