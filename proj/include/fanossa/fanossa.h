/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the fanossa core: expected-dimension combinatorics of Fano
 * schemes of conditionally generic intersections, exact tangent-space
 * verification, finite-field censuses, and stationary-subspace-analysis
 * identifiability and recovery.
 *
 * Every operation takes a JSON request and produces a JSON report.
 * Reports from the same (command, request) pair are byte-identical.
 */
#ifndef FANOSSA_H
#define FANOSSA_H

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes (also used as CLI exit codes). */
enum {
  FANOSSA_OK = 0,
  FANOSSA_EINTERNAL = 1, /* internal contract violation */
  FANOSSA_EINVAL = 2,    /* parameter validation failure */
  FANOSSA_EBUDGET = 3    /* enumeration budget exceeded */
};

typedef struct fanossa_ctx fanossa_ctx;

fanossa_ctx* fanossa_ctx_new(void);
void fanossa_ctx_free(fanossa_ctx* ctx);

/* Message for the last failed call on this context; empty string if none.
 * The pointer stays valid until the next call on the same context. */
const char* fanossa_ctx_error(const fanossa_ctx* ctx);

/* Runs one command with a JSON request.  Commands: "dims", "gen",
 * "tangent", "census", "ssa-gen", "ssa-report", "ssa-recover".
 * On success *out_json receives a malloc'd NUL-terminated JSON report;
 * release it with fanossa_string_free.  Returns an error code. */
int fanossa_run_json(fanossa_ctx* ctx, const char* command,
                     const char* request_json, char** out_json);

void fanossa_string_free(char* s);

const char* fanossa_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FANOSSA_H */
