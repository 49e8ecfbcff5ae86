/*
 * Copyright (c) 2026 the geqlab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the geqlab core: exact arithmetic on Lambda-words over
 * Z^n, generalized equations, their transformations, and the elimination
 * process. All handles are opaque; every function returns a geq_status and
 * reports details through geq_last_error(). Strings returned through char**
 * out-parameters are heap-allocated and must be released with geq_str_free.
 */

#ifndef GEQ_H
#define GEQ_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum geq_status {
  GEQ_OK = 0,
  GEQ_ERR_DOMAIN = 1,    /* invalid value or inapplicable operation */
  GEQ_ERR_USAGE = 2,     /* bad arguments (null handle, bad syntax) */
  GEQ_ERR_UNDEFINED = 3, /* partial operation undefined at this input */
  GEQ_ERR_NOMEM = 4
} geq_status;

/* Message for the last failure on this thread; empty string when none. */
const char* geq_last_error(void);

/* Release a string returned through a char** out-parameter. */
void geq_str_free(char* s);

typedef struct geq_word geq_word;
typedef struct geq_eq geq_eq;
typedef struct geq_solution geq_solution;

/* ----------------------------------------------------------------------- */
/* Lambda-words                                                            */
/* ----------------------------------------------------------------------- */

/* Grammar: atoms separated by whitespace; atom := ident | ident^-1 |
 * (word)^[a1,...,an]. */
geq_status geq_word_parse(int rank, const char* text, geq_word** out);
void geq_word_free(geq_word* w);

geq_status geq_word_str(const geq_word* w, char** out);
/* |w| as a vector literal "[a1,...,an]". */
geq_status geq_word_length(const geq_word* w, char** out);
geq_status geq_word_inverse(const geq_word* w, geq_word** out);
/* Partial product u * v; GEQ_ERR_UNDEFINED when it does not exist. */
geq_status geq_word_mult(const geq_word* u, const geq_word* v, geq_word** out);
/* Longest common initial segment: u = c o u_rest, v = c o v_rest. */
geq_status geq_word_com(const geq_word* u, const geq_word* v, geq_word** c,
                        geq_word** u_rest, geq_word** v_rest);

/* ----------------------------------------------------------------------- */
/* Generalized equations                                                   */
/* ----------------------------------------------------------------------- */

geq_status geq_eq_parse(const char* text, geq_eq** out);
geq_status geq_eq_from_json(const char* text, geq_eq** out);
void geq_eq_free(geq_eq* eq);

geq_status geq_eq_format(const geq_eq* eq, char** out);
geq_status geq_eq_to_json(const geq_eq* eq, char** out);
/* Newline-separated violation list; empty string when well-formed. */
geq_status geq_eq_validate(const geq_eq* eq, char** violations);
geq_status geq_eq_tau(const geq_eq* eq, long* tau);
/* Complexity counters as text or JSON. */
geq_status geq_eq_complexity(const geq_eq* eq, int as_json, char** out);
/* Derived equations (one per dual pair / connection), text or JSON. */
geq_status geq_eq_derive(const geq_eq* eq, int as_json, char** out);
/* Presentation <h_1..h_rho | relators> with its abelianization. */
geq_status geq_eq_present(const geq_eq* eq, int as_json, char** out);
/* Static SVG picture. */
geq_status geq_eq_render_svg(const geq_eq* eq, char** out);

/* ----------------------------------------------------------------------- */
/* Solutions                                                               */
/* ----------------------------------------------------------------------- */

/* One "hN = word" line per item. */
geq_status geq_solution_parse(int rank, const char* text, geq_solution** out);
void geq_solution_free(geq_solution* u);
geq_status geq_solution_format(const geq_solution* u, char** out);
/* *ok = 1 and empty violation when u solves eq. */
geq_status geq_verify(const geq_eq* eq, const geq_solution* u, int* ok,
                      char** violation);

/* ----------------------------------------------------------------------- */
/* Builder: presentation + embedding -> generalized equation               */
/* ----------------------------------------------------------------------- */

/* Input text format:
 *   rank 2
 *   generators x y
 *   relator x y x^-1 y^-1
 *   embed x = (z)^[1,0]
 * Returns the assembled equation and the planted solution. Either
 * out-parameter may be NULL when not wanted. */
geq_status geq_build(const char* presentation_text, geq_eq** eq_out,
                     geq_solution** planted_out);

/* ----------------------------------------------------------------------- */
/* Transformations                                                         */
/* ----------------------------------------------------------------------- */

/* spec := op [key=value]...
 *   et1 lambda=<id> p=<boundary>
 *   et2 lambda=<id> mu=<id>
 *   et3 lambda=<id>          et4 lambda=<id>
 *   et5 lambda=<id> p=<boundary>
 *   d1 lo=<b> hi=<b>         d2 lo=<b> hi=<b>
 *   d3 q=<item>              d4 mu=<id>
 *   d5 | d6 | d7 | d8
 * The optional solution is transported; `pushed` (when non-NULL) receives
 * it. `trace` (when non-NULL) receives the morphism as item substitution
 * lines. d5 writes the kernel equation to `out`. */
geq_status geq_xform(const geq_eq* eq, const char* spec, const geq_solution* u,
                     geq_eq** out, geq_solution** pushed, char** trace);

/* ----------------------------------------------------------------------- */
/* Elimination                                                             */
/* ----------------------------------------------------------------------- */

/* Runs the elimination process; report is JSON with schema field 1: steps,
 * completion, events with Sigma rows, the group chain, and Sigma_complete
 * as an integer matrix. A NULL solution runs on length annotations alone.
 * An exhausted budget returns GEQ_ERR_DOMAIN and still writes the partial
 * report. */
geq_status geq_eliminate(const geq_eq* eq, const geq_solution* u,
                         long max_steps, long f1, char** report_json);

/* ----------------------------------------------------------------------- */
/* Length-function axioms                                                  */
/* ----------------------------------------------------------------------- */

/* words_text: one word per line; axioms: comma list out of L1..L6 or "all".
 * *ok = 1 when every requested axiom passes (L6 NotWitnessed counts as
 * pass). The report is the checker's text summary. */
geq_status geq_check_axioms(int rank, const char* words_text,
                            const char* axioms, int closure_depth, int* ok,
                            char** report);

#ifdef __cplusplus
}
#endif

#endif /* GEQ_H */
