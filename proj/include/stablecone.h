/* C interface to the stable-cone simulation and verification library.
 *
 * All entry points return sc_status; outputs are written through pointers.
 * On any failure the thread-local message from sc_last_error() describes
 * the problem. Objects are created behind opaque handles and released with
 * the matching _destroy function (destroy functions accept NULL).
 *
 * Cones are configured by a JSON spec, e.g.
 *   {"kind": "euclidean", "dim": 2, "alpha": 0.7}
 *   {"kind": "operator", "dim": 2, "alpha": 0.7, "matrix": [[1,0.3],[0,1]]}
 *   {"kind": "max", "dim": 3, "alpha": 0.7}
 *   {"kind": "time", "alpha": 0.7, "grid": [0,1,2,4,8,16,32,64,128,256,512]}
 *   {"kind": "measure", "dim": 2, "alpha": 0.7}
 * Optional keys: "probes" (verification character count), "spectral"
 * ({"kind": ..., "lo": ..., "hi": ...}), and per-kind defaults for grid,
 * matrix, and spectral law apply when omitted.
 */
#ifndef STABLECONE_H
#define STABLECONE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
    SC_OK = 0,
    SC_ERR_INVALID_ARGUMENT = 1, /* null pointer, wrong buffer size */
    SC_ERR_DOMAIN = 2,           /* value outside the mathematical domain */
    SC_ERR_PRECONDITION = 3,     /* operation not defined for this cone/alpha */
    SC_ERR_CONTRACT = 4,         /* malformed JSON or violated call contract */
    SC_ERR_INTERNAL = 5
} sc_status;

typedef struct sc_cone sc_cone;
typedef struct sc_samples sc_samples;
typedef struct sc_reports sc_reports;

/* Library version "major.minor.patch". */
const char* sc_version(void);

/* Message for the most recent failure on this thread; empty string if none.
 * The pointer stays valid until the next failing call on the same thread. */
const char* sc_last_error(void);

/* ---- cones ---- */

sc_status sc_cone_create(const char* spec_json, sc_cone** out);
void sc_cone_destroy(sc_cone* cone);

/* Canonical (sorted-key, defaults-resolved) form of the spec. The pointer
 * stays valid for the cone's lifetime. */
sc_status sc_cone_canonical_json(const sc_cone* cone, const char** out);

/* FNV-1a 64-bit hash of the canonical spec; stable across runs. */
sc_status sc_cone_config_hash(const sc_cone* cone, uint64_t* out);

/* Number of doubles in a flat element (coordinates or grid values); 0 for
 * measure cones, whose elements are atom lists. */
sc_status sc_cone_value_width(const sc_cone* cone, size_t* out);

sc_status sc_cone_alpha(const sc_cone* cone, double* out);

/* ---- sampling ---- */

/* run_json keys (all optional): "n" (default 20000), "r" (truncation level,
 * default 1000), "seed" (default 20260816), "mutation" ("none" |
 * "radial_exponent_one" | "radial_alpha_doubled"). Row i is generated from
 * stream id i of the given seed, so any row can be regenerated alone. */
sc_status sc_sample(const sc_cone* cone, const char* run_json, sc_samples** out);
void sc_samples_destroy(sc_samples* samples);

sc_status sc_samples_count(const sc_samples* samples, size_t* out);
sc_status sc_samples_value_width(const sc_samples* samples, size_t* out);

/* Flat values of row `row` (value cones only; length = value width). The
 * pointer stays valid for the samples object's lifetime. */
sc_status sc_samples_values(const sc_samples* samples, size_t row, const double** data,
                            size_t* len);

/* Number of series terms that produced row `row`. */
sc_status sc_samples_term_count(const sc_samples* samples, size_t row, size_t* out);

/* Seed bookkeeping for row `row`. */
sc_status sc_samples_stream(const sc_samples* samples, size_t row, uint64_t* master_seed,
                            uint64_t* stream_id);

/* A-priori truncation bias bound shared by all rows (NaN when none). */
sc_status sc_samples_bias_bound(const sc_samples* samples, double* out);

/* Atom access for measure cones. `location` points at `dim` doubles. */
sc_status sc_samples_atom_count(const sc_samples* samples, size_t row, size_t* out);
sc_status sc_samples_atom(const sc_samples* samples, size_t row, size_t atom,
                          const double** location, size_t* dim, double* weight);

/* ---- polar decomposition (value cones; measures are rejected) ---- */

/* Radial coordinate tau(x) of the flat element `values` (len = value width). */
sc_status sc_tau(const sc_cone* cone, const double* values, size_t len, double* out);

/* Splits x into radial tau(x) and angular scale(1/tau(x), x); `angular`
 * receives len doubles. */
sc_status sc_decompose(const sc_cone* cone, const double* values, size_t len, double* radial,
                       double* angular);

/* Rebuilds scale(radial, angular); `out` receives len doubles. */
sc_status sc_compose(const sc_cone* cone, double radial, const double* angular, size_t len,
                     double* out);

/* ---- radial measure (no cone handle needed) ---- */

/* theta_alpha[b, inf) = b^(-alpha), b > 0. */
sc_status sc_theta_tail(double alpha, double b, double* out);

/* Inverse-cdf sample of theta_alpha above b from a uniform u in [0, 1). */
sc_status sc_theta_sample_above(double alpha, double b, double u, double* out);

/* ---- verification ---- */

/* suite_json keys (all optional): "suite" ("stability" | "phi" |
 * "homogeneity" | "cms" | "eps" | "all"; default "all"), "n", "r", "seed",
 * "batches", "permutations", "level", "mutation", "cms_skip_rescale",
 * "stability_a", "stability_b", "phi_scales" (array), "band_scales"
 * (array), "eps_probe_cap", "eps_log2_t_max", "eps_samples", "eps_batches".
 * NULL means all defaults. */
sc_status sc_verify(const sc_cone* cone, const char* suite_json, sc_reports** out);
void sc_reports_destroy(sc_reports* reports);

sc_status sc_reports_count(const sc_reports* reports, size_t* out);

/* 1 iff every contained report passed. */
sc_status sc_reports_all_passed(const sc_reports* reports, int* out);

sc_status sc_reports_name(const sc_reports* reports, size_t i, const char** out);
sc_status sc_reports_passed(const sc_reports* reports, size_t i, int* out);
sc_status sc_reports_statistic(const sc_reports* reports, size_t i, double* out);
sc_status sc_reports_threshold(const sc_reports* reports, size_t i, double* out);
sc_status sc_reports_p_value(const sc_reports* reports, size_t i, double* out);

/* Full key=value text form (round-trippable). Pointer valid for the
 * reports object's lifetime. */
sc_status sc_reports_text(const sc_reports* reports, const char** out);

/* One-row-per-report CSV summary. */
sc_status sc_reports_csv(const sc_reports* reports, const char** out);

sc_status sc_reports_write_text(const sc_reports* reports, const char* path);
sc_status sc_reports_write_csv(const sc_reports* reports, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STABLECONE_H */
