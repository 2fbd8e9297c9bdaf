/* C interface of the quintic-strata toolkit.
 *
 * Kept in sync by hand with the #[no_mangle] exports of
 * quintic-strata-capi/src/lib.rs.
 *
 * Conventions:
 *   - status codes: 0 ok, 1 domain error, 2 parse/usage error
 *   - strings returned by qs_* calls are heap-allocated UTF-8 and must be
 *     released with qs_string_free
 *   - qs_last_error() returns the most recent error message on the calling
 *     thread; the pointer is valid until the next failing call there
 */

#ifndef QUINTIC_STRATA_H
#define QUINTIC_STRATA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QS_OK 0
#define QS_ERR_DOMAIN 1
#define QS_ERR_PARSE 2

/* Opaque handle for a parsed graded morphism. */
typedef struct QsMorphism QsMorphism;

const char *qs_last_error(void);
void qs_string_free(char *s);

/* Parse a matrix document over Q (field_prime = 0) or F_p (odd prime
 * below 2^31).  On success writes a fresh handle into *out. */
int32_t qs_parse(const char *text, uint64_t field_prime, QsMorphism **out);
void qs_morphism_free(QsMorphism *m);

/* Canonical document text of the handle. */
char *qs_print(const QsMorphism *m);

/* Classification report as JSON.  chi in 0..=4 selects the moduli space
 * M(5,chi); any other value falls back to the document's space line. */
char *qs_classify_json(const QsMorphism *m, int64_t chi);

/* Canonical text of the determinant (domain error when not square). */
char *qs_det(const QsMorphism *m);

/* Cohomology sweep h0/h1 over twists lo..=hi as JSON. */
char *qs_cohom_json(const QsMorphism *m, int64_t lo, int64_t hi);

/* Dual presentation with twist k; writes a fresh handle into *out. */
int32_t qs_dualize(const QsMorphism *m, int64_t k, QsMorphism **out);

/* Sample a stratum member; JSON report with the document embedded.
 * stratum_index 0..=3 maps to X0..X3; sublabel may be NULL. */
char *qs_sample_json(int64_t chi, uint32_t stratum_index, const char *sublabel,
                     uint64_t seed, uint64_t field_prime,
                     uint64_t coefficient_bound);

/* Dimension audit as JSON; chi outside 0..=4 audits all primal spaces. */
char *qs_audit_json(int64_t chi, uint32_t samples);

/* Closed-form battery versus finite-field enumeration as JSON. */
char *qs_oracle_compare_json(int64_t chi, uint32_t stratum_index,
                             uint64_t trials, uint64_t prime, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* QUINTIC_STRATA_H */
