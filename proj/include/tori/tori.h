/* C interface to the torus cohomology library. All strings returned through
 * `char**` out-parameters are owned by the caller and released with
 * tori_string_free. Every entry point returns a status; on failure the
 * context keeps a JSON error object retrievable with tori_last_error. */
#ifndef TORI_TORI_H
#define TORI_TORI_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  TORI_OK = 0,
  TORI_INVALID_INPUT = 2,
  TORI_RESOURCE_LIMIT = 3,
  TORI_INTERNAL_ERROR = 4
} tori_status;

typedef enum { TORI_FORMAT_JSON = 0, TORI_FORMAT_TEXT = 1 } tori_format;

typedef struct tori_context tori_context;
typedef struct tori_group tori_group;
typedef struct tori_torus tori_torus;
typedef struct tori_report tori_report;

tori_context* tori_context_new(void);
void tori_context_free(tori_context* ctx);
/* Largest cochain module (as a Z-rank) a single computation may assemble. */
void tori_context_set_max_columns(tori_context* ctx, size_t columns);
void tori_context_set_max_order(tori_context* ctx, size_t order);
/* {"error": {"kind": ..., "message": ..., ["position": n]}}, or "" after success. */
const char* tori_last_error(const tori_context* ctx);

void tori_string_free(char* s);

/* Group from a JSON spec or a shorthand such as "catalog:D8". */
tori_status tori_group_new(tori_context* ctx, const char* spec, tori_group** out);
void tori_group_free(tori_group* g);
size_t tori_group_order(const tori_group* g);
tori_status tori_group_describe(tori_context* ctx, const tori_group* g, tori_format format, char** out);

/* Torus datum JSON: {"group": ..., "subgroups": [[...]], "iota": ..., "p": ...}.
 * options JSON (may be NULL): {"convention": "shared" | "per_factor",
 * "degenerate": "allow" | "reject"}. */
tori_status tori_torus_new(tori_context* ctx, const char* datum, const char* options, tori_torus** out);
void tori_torus_free(tori_torus* t);
int tori_torus_is_degenerate(const tori_torus* t);
size_t tori_torus_rank(const tori_torus* t);
size_t tori_torus_aux_rank(const tori_torus* t);
/* Lattice dump: ranks, labels, generator actions and the defining maps. */
tori_status tori_torus_describe(tori_context* ctx, const tori_torus* t, tori_format format, char** out);

/* options JSON (may be NULL): {"degrees": [lo, hi], "family": [[gens], ...]}. */
tori_status tori_tamagawa(tori_context* ctx, const tori_torus* t, const char* options, tori_report** out);
void tori_report_free(tori_report* r);
tori_status tori_report_render(tori_context* ctx, const tori_report* r, tori_format format, char** out);
/* Parses a JSON report and renders it again; used for round-trip checks. */
tori_status tori_report_roundtrip(tori_context* ctx, const char* report_json, char** out);

/* request JSON: {"lattice": <lattice spec>, "degrees": [lo, hi],
 * "method": "cokernel" | "kernel_image"}. A lattice spec is one of
 *   {"torus": <datum>, "which": "X" | "X_aux"}
 *   {"group": <spec>, "trivial": true}
 *   {"group": <spec>, "permutation": [gens]}
 *   {"group": <spec>, "norm_one": [gens]}
 *   {"group": <spec>, "generator_action": [matrix per generator]} */
tori_status tori_cohomology(tori_context* ctx, const char* request, tori_format format, char** out);
/* request JSON: {"lattice": <lattice spec>, "degrees": [1, 2], "family": [[gens], ...]}. */
tori_status tori_sha(tori_context* ctx, const char* request, tori_format format, char** out);
/* request JSON: {"families": [...], "max_order": 16, "include_degenerate": false,
 * "trivial_h_only": false, "degrees": [lo, hi]}. */
tori_status tori_survey(tori_context* ctx, const char* request, tori_format format, char** out);
tori_status tori_catalog(tori_context* ctx, tori_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif
