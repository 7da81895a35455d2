#ifndef K3PIC_H
#define K3PIC_H

/* C interface to the Picard-group / Noether-Lefschetz toolkit.  All results
 * are returned as heap-allocated JSON strings owned by the caller (release
 * with k3pic_string_free).  A session carries configuration and caches; it is
 * not thread-safe, use one session per thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum k3pic_status {
  K3PIC_OK = 0,
  K3PIC_ERR_MATH = 1,   /* mathematical precondition failed */
  K3PIC_ERR_BUDGET = 2, /* resource budget exhausted */
  K3PIC_ERR_CONFIG = 3, /* configuration / input problem */
  K3PIC_ERR_USAGE = 4   /* bad arguments to the API itself */
} k3pic_status;

typedef struct k3pic_session k3pic_session;

k3pic_session* k3pic_session_new(void);
void k3pic_session_free(k3pic_session* s);

/* Options (all strings):
 *   config_dir, cache_dir, window, delta_max, prec, budget, workers */
k3pic_status k3pic_set_option(k3pic_session* s, const char* key, const char* value);

/* Last error message for this session (valid until the next call). */
const char* k3pic_last_error(const k3pic_session* s);

const char* k3pic_version(void);
void k3pic_string_free(char* s);

/* Picard basis of F_{2d}; optionally express H(gamma, n) in it
 * (n as "p/q", pass NULL to skip). */
k3pic_status k3pic_picard(k3pic_session* s, long d, long gamma, const char* n, char** json_out);

/* The Table-style Hodge relation at d. */
k3pic_status k3pic_hodge(k3pic_session* s, long d, char** json_out);

/* Irreducible class [P_{Delta,delta}] in Heegner terms. */
k3pic_status k3pic_nl(k3pic_session* s, long d, long delta_disc, long delta_coset, char** json_out);

/* Irreducible components of D_{h,a} with multiplicities. */
k3pic_status k3pic_nl_decompose(k3pic_session* s, long d, long h, long a, char** json_out);

/* Noether-Lefschetz cone analysis of the canonical class. */
k3pic_status k3pic_cone(k3pic_session* s, long d, char** json_out);

/* Complete a relation (JSON divisor class, NULL = the Hodge relation) to the
 * toroidal boundary over the configured genus representatives. */
k3pic_status k3pic_boundary(k3pic_session* s, long d, const char* relation_json, char** json_out);

/* Number of apparent theta ghosts at index m. */
k3pic_status k3pic_ghosts_count(k3pic_session* s, long m, char** json_out);

/* Ghost lower bounds for the boundary coefficients of a relation. */
k3pic_status k3pic_ghosts_bound(k3pic_session* s, long d, const char* relation_json, char** json_out);

/* Full Kodaira-dimension pipeline; set complete_hodge to also emit the
 * boundary-completed Hodge relation. */
k3pic_status k3pic_kodaira(k3pic_session* s, long d, int complete_hodge, char** json_out);

/* Compare fresh runs against a directory of golden files. */
k3pic_status k3pic_verify(k3pic_session* s, const char* golden_dir, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* K3PIC_H */
